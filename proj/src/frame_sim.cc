#include "flagdec/frame_sim.h"

#include <algorithm>
#include <stdexcept>

#include "flagdec/rng.h"

namespace flagdec {

bool SyndromeFlagVolume::all_zero() const {
  return std::all_of(rounds.begin(), rounds.end(), [](uint16_t w) { return w == 0; });
}

PauliFrame propagate(PauliFrame f, const Gate& g) {
  const uint32_t a = 1u << g.q0;
  switch (g.kind) {
    case GateKind::PrepareZ:
    case GateKind::PrepareX:
      f.x &= ~a;
      f.z &= ~a;
      break;
    case GateKind::Cnot: {
      const uint32_t b = 1u << g.q1;
      if (f.x & a) f.x ^= b;
      if (f.z & b) f.z ^= a;
      break;
    }
    case GateKind::MeasureZ:
    case GateKind::MeasureX:
      break;
  }
  return f;
}

bool measurement_flip(const PauliFrame& f, const Gate& g) {
  if (g.kind == GateKind::MeasureZ) return (f.x >> g.q0) & 1;
  if (g.kind == GateKind::MeasureX) return (f.z >> g.q0) & 1;
  return false;
}

void apply_fault(PauliFrame& f, const Gate& g, const FaultInjection& fault) {
  if (fault.x & 1) f.x ^= 1u << g.q0;
  if (fault.z & 1) f.z ^= 1u << g.q0;
  if (g.kind == GateKind::Cnot) {
    if (fault.x & 2) f.x ^= 1u << g.q1;
    if (fault.z & 2) f.z ^= 1u << g.q1;
  }
}

FrameSimulator::FrameSimulator(const CodeDefinition& code)
    : code_(code), cycle_(build_qec_cycle(code)) {}

uint16_t FrameSimulator::run_cycle(PauliFrame& frame, uint32_t cycle_index,
                                   const FaultSource& faults) const {
  uint16_t bits = 0;
  FaultInjection fault;
  for (const Gate& g : cycle_) {
    const bool measure = g.kind == GateKind::MeasureZ || g.kind == GateKind::MeasureX;
    const bool hit = faults && faults(cycle_index, g, fault);
    if (measure) {
      if (hit) apply_fault(frame, g, fault);
      if (measurement_flip(frame, g)) bits |= static_cast<uint16_t>(1u << g.channel);
    } else {
      frame = propagate(frame, g);
      if (hit) apply_fault(frame, g, fault);
    }
  }
  return bits;
}

MemorySample FrameSimulator::run(int rounds, Basis basis, int m_in, const FaultSource& faults,
                                 const std::function<void(int, PauliFrame&)>& before_cycle,
                                 std::vector<PauliString>* boundary_frames) const {
  if (rounds < 1) throw std::invalid_argument("memory experiment needs T >= 1");
  MemorySample out;
  out.basis = basis;
  out.m_in = static_cast<uint8_t>(m_in & 1);
  out.volume.rounds.resize(static_cast<size_t>(rounds));

  PauliFrame frame;
  if (before_cycle) before_cycle(0, frame);
  uint16_t prev = run_cycle(frame, 0, faults) & 0x3f;
  if (boundary_frames) boundary_frames->assign(1, frame.data());
  for (int t = 1; t <= rounds; ++t) {
    if (before_cycle) before_cycle(t, frame);
    uint16_t bits = run_cycle(frame, static_cast<uint32_t>(t), faults);
    uint16_t s = bits & 0x3f;
    out.volume.rounds[t - 1] = static_cast<uint16_t>((s ^ prev) | (bits & 0xfc0));
    prev = s;
    if (boundary_frames) boundary_frames->push_back(frame.data());
  }
  if (before_cycle) before_cycle(rounds + 1, frame);

  const PauliString data = frame.data();
  const Syndrome fs = syndrome_of(data, code_);
  const uint8_t last = basis == Basis::Z ? (prev >> kChannelSZ) & 7 : (prev >> kChannelSX) & 7;
  out.final_increment = static_cast<uint8_t>((basis == Basis::Z ? fs.sz : fs.sx) ^ last);
  out.m_out = static_cast<uint8_t>(out.m_in ^ corrected_logical_parity(data, basis, code_));
  out.label = static_cast<uint8_t>(out.m_in ^ out.m_out);
  return out;
}

MemorySample FrameSimulator::sample(const NoiseModel& noise, int rounds, Basis basis, int m_in,
                                    uint64_t seed, uint64_t shot) const {
  if (noise.p_ph == 0.0) return run(rounds, basis, m_in, {});
  const double p_cnot = noise.location_fault_probability(GateKind::Cnot);
  const double p_spam = noise.spam_flip();
  const uint64_t per_cycle = cycle_.size();
  FaultSource source = [&](uint32_t cycle, const Gate& g, FaultInjection& f) {
    const bool cnot = g.kind == GateKind::Cnot;
    const double p = cnot ? p_cnot : p_spam;
    const double u = to_unit(keyed_u64(seed, shot, cycle * per_cycle + g.location));
    if (u >= p) return false;
    f = {g.location, 0, 0};
    if (!cnot) {
      (g.kind == GateKind::PrepareZ || g.kind == GateKind::MeasureZ ? f.x : f.z) = 1;
      return true;
    }
    int e = 1 + std::min(14, static_cast<int>(u / p * 15.0));
    int p0 = e >> 2, p1 = e & 3;
    f.x = static_cast<uint8_t>((p0 == 1 || p0 == 2) | ((p1 == 1 || p1 == 2) << 1));
    f.z = static_cast<uint8_t>((p0 == 2 || p0 == 3) | ((p1 == 2 || p1 == 3) << 1));
    return true;
  };
  return run(rounds, basis, m_in, source);
}

MemorySample FrameSimulator::run_with_fault(const FaultInjection& fault, int rounds, Basis basis,
                                            int m_in) const {
  const uint32_t per_cycle = static_cast<uint32_t>(cycle_.size());
  const uint32_t cycle = 1 + fault.location / per_cycle;
  const uint32_t local = fault.location % per_cycle;
  if (cycle > static_cast<uint32_t>(rounds))
    throw std::out_of_range("fault location lies beyond the simulated rounds");
  FaultSource source = [&](uint32_t c, const Gate& g, FaultInjection& f) {
    if (c != cycle || g.location != local) return false;
    f = fault;
    return true;
  };
  return run(rounds, basis, m_in, source);
}

MemorySample FrameSimulator::run_with_data_errors(const std::vector<PauliString>& before_round,
                                                  Basis basis,
                                                  std::vector<PauliString>* boundary_frames) const {
  const int rounds = std::max<int>(1, static_cast<int>(before_round.size()));
  auto inject = [&](int t, PauliFrame& f) {
    if (t >= 1 && t <= static_cast<int>(before_round.size())) {
      f.x ^= before_round[t - 1].x;
      f.z ^= before_round[t - 1].z;
    }
  };
  return run(rounds, basis, 0, {}, inject, boundary_frames);
}

MemorySample sample_memory_experiment(const CodeDefinition& code, const NoiseModel& noise,
                                      int rounds, Basis basis, int m_in, uint64_t seed,
                                      uint64_t shot) {
  return FrameSimulator(code).sample(noise, rounds, basis, m_in, seed, shot);
}

}  // namespace flagdec
