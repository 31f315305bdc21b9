#pragma once

#include <utility>
#include <vector>

#include "flagdec/analysis/correlation.h"
#include "flagdec/frame_sim.h"

namespace flagdec {

struct ChannelPair {
  int a = 0;  // flag channel, round t
  int b = 0;  // syndrome channel, round t + lag
  int lag = 0;

  friend bool operator==(const ChannelPair&, const ChannelPair&) = default;
};

struct HookSignatureSet {
  PauliType error_type = PauliType::X;
  int lag = 0;
  std::vector<ChannelPair> hook;
  std::vector<ChannelPair> baseline;  // remaining flag x syndrome pairs of the same families
};

// Ancilla fault of class E_1..E_3 on `plaquette`: the hook-generating Pauli on the ancilla right
// after the flag CNOT (E_1) or after the second (E_2) or third (E_3) data CNOT.
FaultInjection ancilla_fault(int plaquette, int fault_class);

// Injects the weight-2 hook of every generator into a noiseless run and records the raised
// (flag, syndrome, lag) triples. X errors pair F_X with S_Z; Z errors pair F_Z with S_X.
HookSignatureSet derive_hook_signatures(PauliType error_type,
                                        const FrameSimulator& sim = FrameSimulator());

// (hook_mean, baseline_mean) of the report entries; pairs at another lag are ignored.
std::pair<double, double> hook_excess(const CorrelationReport& report,
                                      const HookSignatureSet& signatures);

}  // namespace flagdec
