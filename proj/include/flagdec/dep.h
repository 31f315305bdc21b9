#pragma once

#include <functional>
#include <vector>

#include "flagdec/frame_sim.h"

namespace flagdec {

// Predicted logical flip of the sample's readout basis.
using Decoder = std::function<int(const MemorySample&)>;

Decoder identity_decoder();
Decoder always_flip_decoder();

struct DepReport {
  Basis basis = Basis::Z;
  int cycles = 2;
  size_t locations = 0;   // N_loc
  size_t injections = 0;
  size_t failures = 0;
  double failure_fraction = 0.0;
  std::vector<FaultInjection> failing;
};

// Returns decoder prediction XOR true label for one deterministic single-fault run.
int run_with_fault(const FrameSimulator& sim, const FaultInjection& fault, int rounds, Basis basis,
                   const Decoder& decoder);

DepReport dep_failure_fraction(const Decoder& decoder, Basis basis,
                               const FrameSimulator& sim = FrameSimulator(), int cycles = 2);

}  // namespace flagdec
