#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "flagdec/circuit.h"
#include "flagdec/xai/shapley.h"

namespace flagdec {

// Pearson correlation of channel a at round t with channel b at round t + lag, pooled over
// samples and every valid t.
struct CorrelationReport {
  int lag = 0;
  std::array<double, kChannels * kChannels> matrix{};
  uint64_t samples = 0;  // attributions contributing at least one pair
  uint64_t pairs = 0;    // pooled (sample, t) pairs
  // Channels with zero variance on the leading (a) or lagged (b) side; their entries are 0.
  std::array<bool, kChannels> zero_variance_lead{};
  std::array<bool, kChannels> zero_variance_lag{};

  double at(int a, int b) const { return matrix[static_cast<size_t>(a) * kChannels + b]; }
};

// Throws std::invalid_argument with fewer than two pooled pairs.
CorrelationReport attribution_correlations(std::span<const xai::Attribution> attributions, int lag);

}  // namespace flagdec
