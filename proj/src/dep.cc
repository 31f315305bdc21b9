#include "flagdec/dep.h"

namespace flagdec {

Decoder identity_decoder() {
  return [](const MemorySample&) { return 0; };
}

Decoder always_flip_decoder() {
  return [](const MemorySample&) { return 1; };
}

int run_with_fault(const FrameSimulator& sim, const FaultInjection& fault, int rounds, Basis basis,
                   const Decoder& decoder) {
  MemorySample s = sim.run_with_fault(fault, rounds, basis);
  return (decoder(s) & 1) ^ s.label;
}

DepReport dep_failure_fraction(const Decoder& decoder, Basis basis, const FrameSimulator& sim,
                               int cycles) {
  DepReport r;
  r.basis = basis;
  r.cycles = cycles;
  GateList gates = repeat_cycles(sim.cycle(), cycles);
  r.locations = gates.size();
  for (const FaultInjection& f : enumerate_single_faults(gates)) {
    ++r.injections;
    if (run_with_fault(sim, f, cycles, basis, decoder)) {
      ++r.failures;
      r.failing.push_back(f);
    }
  }
  r.failure_fraction = r.injections ? static_cast<double>(r.failures) / r.injections : 0.0;
  return r;
}

}  // namespace flagdec
