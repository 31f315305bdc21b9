#include "flagdec/seqlut.h"

#include <algorithm>
#include <cmath>
#include <bit>
#include <memory>
#include <stdexcept>

#include "flagdec/parallel.h"
#include "flagdec/rng.h"

namespace flagdec {

FlagCorrectionTable FlagCorrectionTable::build(const CodeDefinition& code) {
  FlagCorrectionTable t;
  for (int g = 0; g < kGenerators; ++g) {
    const auto& order = code.gate_order[g];
    // An ancilla fault after data gate n of the flagged window spreads to the remaining data gates.
    for (int cls = 1; cls <= 3; ++cls) {
      uint8_t mask = 0;
      for (int i = cls; i < 4; ++i) mask |= static_cast<uint8_t>(1u << (order[i] - 1));
      FlagCorrectionRow row;
      row.generator = g;
      row.fault_class = cls;
      row.syndrome = half_syndrome(mask, code);
      row.replaced = pure_error_correction(row.syndrome, PauliType::Z, code).x;
      row.correction = mask;
      t.rows_.push_back(row);
    }
  }
  return t;
}

std::optional<uint8_t> FlagCorrectionTable::lookup(uint8_t flagged, uint8_t syndrome) const {
  for (const auto& row : rows_)
    if (((flagged >> row.generator) & 1) && row.syndrome == syndrome) return row.correction;
  return std::nullopt;
}

SeqLutDecoder::SeqLutDecoder(const CodeDefinition& code)
    : code_(code), table_(FlagCorrectionTable::build(code)) {}

int SeqLutDecoder::decode_pass(const SyndromeFlagVolume& volume, PauliType error_type,
                               std::optional<uint8_t> terminal, PauliString* frame_out,
                               std::vector<SeqLutState>* trace) const {
  const bool bit = error_type == PauliType::X;
  const int s_channel = bit ? kChannelSZ : kChannelSX;
  const int f_channel = bit ? kChannelFX : kChannelFZ;
  const PauliType stabilizers = bit ? PauliType::Z : PauliType::X;
  const int T = volume.size();
  const int last = terminal ? T + 1 : T;

  // Cumulative syndrome relative to the prep reference; round T+1 is the terminal readout.
  std::vector<uint8_t> cum(static_cast<size_t>(last) + 1, 0), flags(static_cast<size_t>(last) + 1, 0);
  for (int t = 1; t <= T; ++t) {
    cum[t] = cum[t - 1] ^ volume.half(t - 1, s_channel);
    flags[t] = volume.half(t - 1, f_channel);
  }
  if (terminal) cum[T + 1] = cum[T] ^ (*terminal & 7);

  SeqLutState st;
  uint8_t flagged = 0;
  uint8_t frame = 0;
  auto correct = [&](int round) {
    const uint8_t d = cum[round] ^ cum[st.reference];
    std::optional<uint8_t> c;
    if (st.signal == Signal::Flag) c = table_.lookup(flagged, d);
    if (!c) {
      const PauliString p = pure_error_correction(d, stabilizers, code_);
      c = bit ? p.x : p.z;
    }
    frame ^= *c;
    st.signal = Signal::None;
    st.reference = round;
  };

  while (st.head <= last) {
    if (trace) trace->push_back(st);
    if (st.signal == Signal::None) {
      if (flags[st.head]) {
        st.signal = Signal::Flag;
        flagged = flags[st.head];
      } else if (cum[st.head] != cum[st.reference]) {
        st.signal = Signal::Error;
      } else {
        st.reference = st.head;
      }
      ++st.head;
    } else {
      correct(st.head);
      ++st.head;
    }
  }
  if (st.signal != Signal::None) correct(last);
  st.frame = PauliString::of_type(error_type, frame);
  if (trace) trace->push_back(st);
  if (frame_out) *frame_out = st.frame;

  const uint8_t s = half_syndrome(frame, code_);
  const uint8_t closed = frame ^ (bit ? pure_error_correction(s, PauliType::Z, code_).x
                                      : pure_error_correction(s, PauliType::X, code_).z);
  const uint8_t logical = bit ? code_.logical_z_mask() : code_.logical_x_mask();
  return std::popcount(static_cast<unsigned>(closed & logical)) & 1;
}

SeqLutResult SeqLutDecoder::decode(const SyndromeFlagVolume& volume,
                                   std::optional<std::pair<Basis, uint8_t>> final_readout) const {
  if (volume.size() < 1) throw std::invalid_argument("SeqLUT needs T >= 1");
  std::optional<uint8_t> tz, tx;
  if (final_readout) (final_readout->first == Basis::Z ? tz : tx) = final_readout->second;
  SeqLutResult r;
  PauliString fx, fz;
  r.x_flip = decode_pass(volume, PauliType::X, tz, &fx);
  r.z_flip = decode_pass(volume, PauliType::Z, tx, &fz);
  r.frame = compose(fx, fz);
  return r;
}

int SeqLutDecoder::predict(const MemorySample& s) const {
  if (s.basis == Basis::Z) return decode_pass(s.volume, PauliType::X, s.final_increment);
  return decode_pass(s.volume, PauliType::Z, s.final_increment);
}

Decoder seqlut_decoder(const CodeDefinition& code) {
  auto dec = std::make_shared<SeqLutDecoder>(code);
  return [dec](const MemorySample& s) { return dec->predict(s); };
}

LogicalErrorRate logical_error_rate(const NoiseModel& noise, int max_rounds, uint64_t shots,
                                    uint64_t seed, Basis basis, const Decoder& decoder, int threads,
                                    const FrameSimulator& sim) {
  if (max_rounds < 1) throw std::invalid_argument("logical_error_rate needs T >= 1");
  std::vector<int> rounds(static_cast<size_t>(max_rounds));
  for (int t = 1; t <= max_rounds; ++t) rounds[static_cast<size_t>(t - 1)] = t;
  return logical_error_rate(noise, rounds, shots, seed, basis, decoder, threads, sim);
}

LogicalErrorRate logical_error_rate(const NoiseModel& noise, const std::vector<int>& rounds,
                                    uint64_t shots, uint64_t seed, Basis basis,
                                    const Decoder& decoder, int threads,
                                    const FrameSimulator& sim) {
  if (shots < 1) throw std::invalid_argument("logical_error_rate needs shots >= 1");
  if (rounds.empty()) throw std::invalid_argument("logical_error_rate needs at least one round");
  for (int t : rounds)
    if (t < 1) throw std::invalid_argument("logical_error_rate needs T >= 1");
  const Decoder dec = decoder ? decoder : seqlut_decoder(sim.code());
  LogicalErrorRate r;
  r.basis = basis;
  r.p_ph = noise.p_ph;
  r.shots_per_round = shots;
  std::vector<double> ts, ys, sig;
  for (int t : rounds) {
    const uint64_t stream = derive_seed(seed, static_cast<uint64_t>(t));
    const int workers = resolve_threads(threads);
    std::vector<uint64_t> partial(static_cast<size_t>(workers), 0);
    const size_t chunk = (shots + workers - 1) / workers;
    parallel_for(static_cast<size_t>(workers), workers, [&](size_t wb, size_t we) {
      for (size_t w = wb; w < we; ++w) {
        uint64_t fails = 0;
        const size_t end = std::min<size_t>(shots, (w + 1) * chunk);
        for (size_t i = w * chunk; i < end; ++i) {
          MemorySample s = sim.sample(noise, t, basis, static_cast<int>(i & 1), stream, i);
          fails += static_cast<uint64_t>((dec(s) & 1) ^ s.label);
        }
        partial[w] = fails;
      }
    });
    uint64_t total = 0;
    for (uint64_t f : partial) total += f;
    r.rounds.push_back(t);
    r.failures.push_back(total);
    WilsonInterval w = wilson_interval(total, shots);
    r.infidelity.push_back(w);
    ts.push_back(t);
    ys.push_back(w.p_hat);
    sig.push_back(std::max(w.sigma / 2.0, 1.0 / static_cast<double>(shots)));
  }
  if (ts.size() >= 3) {
    r.fit = fit_infidelity(ts, ys, sig);
  } else {
    // Invert the infidelity model at the last round with t0 = 0.
    const double i = std::min(ys.back(), 0.5);
    r.fit.params = {0.5 * (1.0 - std::pow(1.0 - 2.0 * i, 1.0 / ts.back())), 0.0};
    const double grad = i < 0.5 ? std::pow(1.0 - 2.0 * i, 1.0 / ts.back() - 1.0) / ts.back() : 0.0;
    r.fit.covariance = {grad * grad * sig.back() * sig.back(), 0.0, 0.0, 0.0};
    r.fit.converged = true;
    r.fit.message = "fewer than three rounds; p_L from the last round with t0 = 0";
  }
  return r;
}

}  // namespace flagdec
