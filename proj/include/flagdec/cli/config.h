#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "flagdec/nn/spec.h"
#include "flagdec/nn/train.h"

namespace flagdec::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DecoderId { Lut, SrnnX, SrnnZ, Drnn, Dnn2 };

const char* decoder_name(DecoderId d);
DecoderId decoder_from_name(const std::string& s);  // throws ConfigError

struct DataConfig {
  double p_ph = 1e-3;
  int min_rounds = 1;
  int max_rounds = 8;
  uint64_t train_shots = 100000;
  uint64_t validation_shots = 14000;
  uint64_t test_shots = 10000;
};

struct NetworkConfig {
  int lstm_units = 36;
  std::vector<int> dense{48, 24, 12};
  double dropout = 0.2;
  std::string lstm_output = "tanh";
};

struct TrainingSection {
  int epochs = 50;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  double forget_bias = 1.0;
  bool stop_at_dep = false;  // end training at the first epoch with zero DEP failures
};

struct EvalConfig {
  uint64_t shots = 20000;  // per (p_ph, t) point
  int max_rounds = 8;
  double scaling_window_max = 5e-3;
};

struct ExplainConfig {
  std::string method = "deepshap";  // deepshap | exact | lrp
  uint64_t samples = 2000;
  uint64_t background = 1000;
  int lag = 0;
};

struct RunConfig {
  uint64_t seed = 1;
  std::string out = "flagdec-run";
  DecoderId decoder = DecoderId::Lut;
  int threads = 0;
  DataConfig data;
  std::vector<double> noise_sweep{1e-3, 2e-3, 5e-3};
  NetworkConfig network;
  TrainingSection training;
  EvalConfig eval;
  ExplainConfig explain;

  void validate() const;  // throws ConfigError
};

// Missing keys keep their defaults; unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& c);

// Data section actually used: dnn2 always sees exactly two rounds.
DataConfig effective_data(const RunConfig& c);

uint64_t fnv1a64(const std::string& bytes);

// Stage-scoped hashes. Data covers what determines the datasets, model adds network and
// training, and the evaluation hash covers every downstream setting.
uint64_t data_hash(const RunConfig& c);
uint64_t model_hash(const RunConfig& c);
uint64_t eval_hash(const RunConfig& c);

std::string hex_hash(uint64_t h);

nn::NetworkSpec network_spec(const RunConfig& c);  // throws ConfigError for lut
nn::TrainingConfig training_config(const RunConfig& c);
// Readout basis evaluated for the decoder (lut and drnn default to Z).
Basis decoder_basis(DecoderId d);
// Initial-state families of generated data.
std::vector<std::pair<Basis, int>> state_families(DecoderId d);

}  // namespace flagdec::cli
