#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace flagdec::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

struct AdamState {
  AdamConfig config;
  std::vector<double> m;
  std::vector<double> v;
  uint64_t step = 0;

  void reset(size_t n);
};

// One step: moving moments, bias correction by 1 - beta^tau, w -= lr * mhat / sqrt(vhat + eps).
void adam_update(AdamState& state, std::span<double> weights, std::span<const double> gradients);

}  // namespace flagdec::nn
