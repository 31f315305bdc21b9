#include "flagdec/circuit.h"

#include <stdexcept>

namespace flagdec {

std::string channel_name(int c) {
  static const char* names[kChannels] = {"S_X1", "S_X2", "S_X3", "S_Z1", "S_Z2", "S_Z3",
                                         "F_X1", "F_X2", "F_X3", "F_Z1", "F_Z2", "F_Z3"};
  if (c < 0 || c >= kChannels) throw std::out_of_range("channel index");
  return names[c];
}

GateList build_plaquette(const CodeDefinition& code, int plaquette) {
  const int gen = plaquette % 3;
  const bool xtype = plaquette_type(plaquette) == PauliType::X;
  const auto& order = code.gate_order[gen];
  const auto anc = static_cast<uint8_t>(ancilla_qubit(plaquette));
  const auto flag = static_cast<uint8_t>(flag_qubit(plaquette));
  auto data = [&](int i) { return static_cast<uint8_t>(order[i] - 1); };

  GateList g;
  if (xtype) {
    // Ancilla in |+> drives the data; the |0> flag picks up ancilla bit flips between its couplings.
    g.push_back({GateKind::PrepareX, anc});
    g.push_back({GateKind::PrepareZ, flag});
    g.push_back({GateKind::Cnot, anc, data(0)});
    g.push_back({GateKind::Cnot, anc, flag});
    g.push_back({GateKind::Cnot, anc, data(1)});
    g.push_back({GateKind::Cnot, anc, data(2)});
    g.push_back({GateKind::Cnot, anc, flag});
    g.push_back({GateKind::Cnot, anc, data(3)});
    g.push_back({GateKind::MeasureX, anc, 0, 0, static_cast<int8_t>(kChannelSX + gen)});
    g.push_back({GateKind::MeasureZ, flag, 0, 0, static_cast<int8_t>(kChannelFX + gen)});
  } else {
    g.push_back({GateKind::PrepareZ, anc});
    g.push_back({GateKind::PrepareX, flag});
    g.push_back({GateKind::Cnot, data(0), anc});
    g.push_back({GateKind::Cnot, flag, anc});
    g.push_back({GateKind::Cnot, data(1), anc});
    g.push_back({GateKind::Cnot, data(2), anc});
    g.push_back({GateKind::Cnot, flag, anc});
    g.push_back({GateKind::Cnot, data(3), anc});
    g.push_back({GateKind::MeasureZ, anc, 0, 0, static_cast<int8_t>(kChannelSZ + gen)});
    g.push_back({GateKind::MeasureX, flag, 0, 0, static_cast<int8_t>(kChannelFZ + gen)});
  }
  return g;
}

GateList build_qec_cycle(const CodeDefinition& code) {
  GateList cycle;
  for (int p = 0; p < kPlaquettes; ++p) {
    GateList part = build_plaquette(code, p);
    cycle.insert(cycle.end(), part.begin(), part.end());
  }
  for (size_t i = 0; i < cycle.size(); ++i) cycle[i].location = static_cast<uint32_t>(i);
  return cycle;
}

GateList repeat_cycles(const GateList& cycle, int cycles) {
  GateList out;
  out.reserve(cycle.size() * static_cast<size_t>(cycles));
  for (int c = 0; c < cycles; ++c) {
    for (Gate g : cycle) {
      g.location = static_cast<uint32_t>(out.size());
      out.push_back(g);
    }
  }
  return out;
}

NoiseModel::NoiseModel(double p) : p_ph(p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("p_ph must lie in [0,1)");
}

double NoiseModel::location_fault_probability(GateKind kind) const {
  return kind == GateKind::Cnot ? 15.0 * two_q() : spam_flip();
}

std::vector<FaultInjection> error_set(const Gate& gate) {
  switch (gate.kind) {
    case GateKind::PrepareZ:
    case GateKind::MeasureZ:
      return {{gate.location, 1, 0}};
    case GateKind::PrepareX:
    case GateKind::MeasureX:
      return {{gate.location, 0, 1}};
    case GateKind::Cnot: {
      std::vector<FaultInjection> out;
      out.reserve(15);
      // Pauli pair index e = 4*P0 + P1 with I,X,Y,Z = 0..3.
      for (int e = 1; e < 16; ++e) {
        int p0 = e >> 2, p1 = e & 3;
        auto xbit = [](int p) { return p == 1 || p == 2; };
        auto zbit = [](int p) { return p == 2 || p == 3; };
        out.push_back({gate.location,
                       static_cast<uint8_t>(xbit(p0) | (xbit(p1) << 1)),
                       static_cast<uint8_t>(zbit(p0) | (zbit(p1) << 1))});
      }
      return out;
    }
  }
  return {};
}

std::vector<FaultInjection> enumerate_single_faults(const GateList& gates) {
  std::vector<FaultInjection> out;
  for (const Gate& g : gates) {
    auto set = error_set(g);
    out.insert(out.end(), set.begin(), set.end());
  }
  return out;
}

std::vector<FaultInjection> enumerate_single_faults(const CodeDefinition& code, int cycles) {
  return enumerate_single_faults(repeat_cycles(build_qec_cycle(code), cycles));
}

}  // namespace flagdec
