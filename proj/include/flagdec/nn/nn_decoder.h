#pragma once

#include <memory>

#include "flagdec/dep.h"
#include "flagdec/nn/network.h"

namespace flagdec::nn {

// Thresholds the head of the sample's readout basis at 1/2. Outputs are memoized per distinct
// (basis, volume) so repeated low-noise volumes are evaluated once; safe to share across threads.
class NetworkDecoder {
 public:
  explicit NetworkDecoder(Network net);

  double probability(const MemorySample& s) const;
  int predict(const MemorySample& s) const { return probability(s) > 0.5 ? 1 : 0; }
  Decoder as_decoder() const;
  const Network& network() const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

}  // namespace flagdec::nn
