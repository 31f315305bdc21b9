#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flagdec/analysis/hooks.h"
#include "flagdec/nn/checkpoint.h"
#include "flagdec/seqlut.h"

namespace flagdec {

struct MonitorConfig {
  std::vector<double> noise_sweep{1e-3, 2e-3, 5e-3};
  double scaling_window_max = 1.0;  // only p_ph at or below enter the scaling fit
  int max_rounds = 8;
  uint64_t shots = 20000;           // per (p_ph, t) point
  uint64_t seed = 0;
  Basis basis = Basis::Z;
  int dep_cycles = 2;
  size_t background_size = 1000;
  int threads = 0;
};

struct MonitorRow {
  uint64_t epoch = 0;
  double train_loss = 0.0;
  std::vector<LogicalErrorRate> curves;  // one per swept p_ph
  FitResult scaling;                     // (a, b); not converged when a p_L is zero
  double b = 0.0;
  double b_sigma = 0.0;
  double dep_failure = 0.0;
  double hook_mean = 0.0;
  double baseline_mean = 0.0;
};

// Evaluates every checkpoint: infidelity curves over the sweep, scaling exponent, DEP failure
// fraction, and hook/baseline DeepSHAP correlation means on `explain` against `background`.
std::vector<MonitorRow> ft_monitor(std::span<const nn::Checkpoint> checkpoints,
                                   std::span<const MemorySample> explain,
                                   std::span<const MemorySample> background,
                                   const MonitorConfig& config);

struct CooccurrenceResult {
  bool pass = false;
  int ft_epoch = -1;          // first epoch with zero DEP failures
  int scaling_epoch = -1;     // first epoch from which b stays inside 2 +- tolerance
  int divergence_epoch = -1;  // first epoch with hook_mean - baseline_mean above the margin
  std::string message;
};

CooccurrenceResult check_ft_cooccurrence(std::span<const MonitorRow> rows, int window = 3,
                                         double b_tolerance = 0.2, double divergence_margin = 0.1);

// One row per epoch, whitespace-separated columns.
std::string monitor_table(std::span<const MonitorRow> rows);

}  // namespace flagdec
