#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flagdec/nn/adam.h"
#include "flagdec/nn/spec.h"

namespace flagdec::nn {

inline constexpr uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  uint64_t epoch = 0;
  uint64_t config_hash = 0;
  NetworkSpec spec;
  std::vector<double> parameters;
  AdamState adam;
  std::string rng_state;  // std::mt19937_64 textual state
  double train_loss = 0.0;

  friend bool operator==(const Checkpoint& a, const Checkpoint& b);
};

std::string serialize_checkpoint(const Checkpoint& c);
Checkpoint deserialize_checkpoint(const std::string& bytes);
void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace flagdec::nn
