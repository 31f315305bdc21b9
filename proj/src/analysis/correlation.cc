#include "flagdec/analysis/correlation.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flagdec {

namespace {

template <class Fn>
void for_each_pair(std::span<const xai::Attribution> attrs, int lag, Fn&& fn) {
  for (const auto& a : attrs) {
    const int t0 = lag < 0 ? -lag : 0;
    const int t1 = lag < 0 ? a.rounds : a.rounds - lag;
    for (int t = t0; t < t1; ++t)
      fn(&a.phi[static_cast<size_t>(t) * kChannels], &a.phi[static_cast<size_t>(t + lag) * kChannels]);
  }
}

}  // namespace

CorrelationReport attribution_correlations(std::span<const xai::Attribution> attributions,
                                           int lag) {
  CorrelationReport r;
  r.lag = lag;
  std::array<double, kChannels> mx{}, my{};
  for (const auto& a : attributions)
    if (a.rounds > std::abs(lag)) ++r.samples;
  for_each_pair(attributions, lag, [&](const double* x, const double* y) {
    ++r.pairs;
    for (int c = 0; c < kChannels; ++c) {
      mx[c] += x[c];
      my[c] += y[c];
    }
  });
  if (r.pairs < 2) throw std::invalid_argument("correlation needs at least two pooled pairs");
  const double n = static_cast<double>(r.pairs);
  for (int c = 0; c < kChannels; ++c) {
    mx[c] /= n;
    my[c] /= n;
  }
  std::array<double, kChannels> vx{}, vy{};
  std::array<double, kChannels * kChannels> cov{};
  for_each_pair(attributions, lag, [&](const double* x, const double* y) {
    std::array<double, kChannels> dx, dy;
    for (int c = 0; c < kChannels; ++c) {
      dx[c] = x[c] - mx[c];
      dy[c] = y[c] - my[c];
      vx[c] += dx[c] * dx[c];
      vy[c] += dy[c] * dy[c];
    }
    for (int a = 0; a < kChannels; ++a)
      for (int b = 0; b < kChannels; ++b) cov[static_cast<size_t>(a) * kChannels + b] += dx[a] * dy[b];
  });
  for (int c = 0; c < kChannels; ++c) {
    r.zero_variance_lead[c] = !(vx[c] > 0.0);
    r.zero_variance_lag[c] = !(vy[c] > 0.0);
  }
  for (int a = 0; a < kChannels; ++a)
    for (int b = 0; b < kChannels; ++b) {
      const size_t i = static_cast<size_t>(a) * kChannels + b;
      if (r.zero_variance_lead[a] || r.zero_variance_lag[b]) {
        r.matrix[i] = 0.0;
        continue;
      }
      const double c = cov[i] / std::sqrt(vx[a] * vy[b]);
      r.matrix[i] = std::clamp(c, -1.0, 1.0);
    }
  return r;
}

}  // namespace flagdec
