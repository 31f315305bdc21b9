#include "flagdec/analysis/hooks.h"

#include <algorithm>
#include <stdexcept>

namespace flagdec {

FaultInjection ancilla_fault(int plaquette, int fault_class) {
  if (plaquette < 0 || plaquette >= kPlaquettes || fault_class < 1 || fault_class > 3)
    throw std::invalid_argument("ancilla_fault: bad plaquette or class");
  // Gate indices inside a plaquette: 0-1 preps, 2 data, 3 flag, 4 data, 5 data, 6 flag, 7 data.
  static constexpr uint32_t kGate[3] = {3, 4, 5};
  FaultInjection f;
  f.location = static_cast<uint32_t>(plaquette) * 10 + kGate[fault_class - 1];
  if (plaquette_type(plaquette) == PauliType::X) {
    f.x = 1;  // ancilla is the control
  } else {
    f.z = 2;  // ancilla is the target
  }
  return f;
}

HookSignatureSet derive_hook_signatures(PauliType error_type, const FrameSimulator& sim) {
  HookSignatureSet set;
  set.error_type = error_type;
  const int flag0 = error_type == PauliType::X ? kChannelFX : kChannelFZ;
  const int synd0 = error_type == PauliType::X ? kChannelSZ : kChannelSX;
  const int plaq0 = error_type == PauliType::X ? 0 : 3;
  const Basis basis = error_type == PauliType::X ? Basis::Z : Basis::X;
  constexpr int kRounds = 3;
  bool have_lag = false;
  for (int g = 0; g < 3; ++g) {
    const MemorySample s = sim.run_with_fault(ancilla_fault(plaq0 + g, 2), kRounds, basis);
    if (!s.volume.at(0, flag0 + g)) throw std::logic_error("hook fault did not raise its flag");
    for (int t = 0; t < kRounds; ++t)
      for (int j = 0; j < 3; ++j) {
        if (!s.volume.at(t, synd0 + j)) continue;
        if (have_lag && t != set.lag) throw std::logic_error("hook signatures at mixed lags");
        set.lag = t;
        have_lag = true;
        const ChannelPair p{flag0 + g, synd0 + j, t};
        if (std::find(set.hook.begin(), set.hook.end(), p) == set.hook.end()) set.hook.push_back(p);
      }
  }
  if (!have_lag) throw std::logic_error("hook faults left no syndrome");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const ChannelPair p{flag0 + i, synd0 + j, set.lag};
      if (std::find(set.hook.begin(), set.hook.end(), p) == set.hook.end()) set.baseline.push_back(p);
    }
  return set;
}

std::pair<double, double> hook_excess(const CorrelationReport& report,
                                      const HookSignatureSet& signatures) {
  auto mean = [&](const std::vector<ChannelPair>& v) {
    double s = 0.0;
    int n = 0;
    for (const auto& p : v) {
      if (p.lag != report.lag) continue;
      s += report.at(p.a, p.b);
      ++n;
    }
    return n ? s / n : 0.0;
  };
  return {mean(signatures.hook), mean(signatures.baseline)};
}

}  // namespace flagdec
