#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "flagdec/frame_sim.h"
#include "flagdec/nn/adam.h"
#include "flagdec/nn/checkpoint.h"
#include "flagdec/nn/network.h"

namespace flagdec::nn {

struct TrainingSample {
  NetworkInput input;
  std::array<double, 2> label{0.0, 0.0};
  uint8_t mask = 1;  // bit h: head h carries a label
};

// Single-head specs label head 0; dual-head specs label only the head of the sample's basis.
std::vector<TrainingSample> make_training_samples(const NetworkSpec& spec,
                                                  std::span<const MemorySample> samples);

struct TrainingConfig {
  int batch_size = 64;
  int epochs = 1;
  AdamConfig adam;
  uint64_t seed = 0;
  double forget_bias = 1.0;
};

struct EpochStats {
  uint64_t epoch = 0;
  double mean_loss = 0.0;
  std::array<double, 2> head_gradient_l1{0.0, 0.0};
};

class Trainer {
 public:
  Trainer(const NetworkSpec& spec, const TrainingConfig& config, uint64_t config_hash);
  // Resumes from a checkpoint; continuation is identical to an uninterrupted run.
  Trainer(const Checkpoint& from, const TrainingConfig& config);

  EpochStats run_epoch(std::span<const TrainingSample> data);
  Checkpoint checkpoint() const;

  const Network& network() const { return net_; }
  uint64_t epoch() const { return epoch_; }

 private:
  Network net_;
  TrainingConfig config_;
  uint64_t config_hash_ = 0;
  AdamState adam_;
  std::mt19937_64 rng_;
  uint64_t epoch_ = 0;
  double last_loss_ = 0.0;
};

// Returns the epoch-0 checkpoint followed by one checkpoint per epoch. The callback may stop
// training early by returning false.
std::vector<Checkpoint> train(
    const NetworkSpec& spec, std::span<const TrainingSample> data, const TrainingConfig& config,
    uint64_t config_hash,
    const std::function<bool(const Checkpoint&, const EpochStats&)>& on_epoch = {});

Network network_from_checkpoint(const Checkpoint& c);

}  // namespace flagdec::nn
