#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "flagdec/nn/spec.h"

namespace flagdec::nn {

enum class Mode { Train, Eval };

double activate(Activation a, double z);
// Derivative expressed through the pre-activation z and the output y.
double activate_derivative(Activation a, double z, double y);

// Views into a network's flat parameter vector. Matrices are input-major: K[i * 4n + g * n + j]
// couples input i to unit j of gate g, gates ordered forget, input filter, candidate, output.
struct LstmWeights {
  size_t in = 0;
  size_t units = 0;
  const double* kx = nullptr;  // in x 4n
  const double* kh = nullptr;  // n x 4n
  const double* b = nullptr;   // 4n
  Activation output = Activation::Tanh;
};

struct LstmStepCache {
  std::vector<double> z;       // 4n gate pre-activations
  std::vector<double> gates;   // 4n: F, I', C', O
  std::vector<double> c_prev, h_prev, c, act_c, h;
};

// One step of the recurrence; fills `out` and returns nothing else.
void lstm_step(const LstmWeights& w, std::span<const double> x, std::span<const double> h_prev,
               std::span<const double> c_prev, LstmStepCache& out);

struct LayerCache {
  std::vector<LstmStepCache> steps;  // Lstm: first `length` entries valid
  std::vector<double> seq_in;        // Lstm: rows x in
  std::vector<double> in, z, out;    // Dense / Dropout vectors
  std::vector<double> mask;          // Dropout scale per unit
};

struct ForwardCache {
  int rows = 0;
  int length = 0;
  std::vector<LayerCache> layers;
  std::vector<double> output;
};

struct LayerInfo {
  LayerKind kind;
  size_t in = 0;
  size_t out = 0;
  size_t offset = 0;  // first parameter
  size_t count = 0;   // parameter count
};

class Network {
 public:
  explicit Network(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  const std::vector<LayerInfo>& layers() const { return info_; }
  size_t parameter_count() const { return params_.size(); }
  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }

  // Glorot-uniform weights, zero biases, LSTM forget-gate bias set to `forget_bias`.
  void initialize(std::mt19937_64& rng, double forget_bias = 1.0);

  LstmWeights lstm_weights(size_t layer) const;

  // Train mode draws dropout masks from `rng` (required then).
  const std::vector<double>& forward(const NetworkInput& x, Mode mode, std::mt19937_64* rng,
                                     ForwardCache& cache) const;
  std::vector<double> predict(const NetworkInput& x) const;

  // Accumulates parameter and input gradients. With `wrt_logits`, d_out is the gradient with
  // respect to the final layer's pre-activation. Either target span may be empty.
  void backward(const ForwardCache& cache, std::span<const double> d_out, bool wrt_logits,
                std::span<double> d_params, std::span<double> d_input) const;

  // DeepLIFT multipliers of the outputs (weighted by d_out) with respect to the inputs, relative
  // to a reference pass `ref` with the same mask length. Accumulates into m_input.
  void backward_multipliers(const ForwardCache& x, const ForwardCache& ref,
                            std::span<const double> d_out, std::span<double> m_input) const;

 private:
  void backward_impl(const ForwardCache& c, const ForwardCache* ref, std::span<const double> d_out,
                     bool wrt_logits, double* d_params, double* d_input) const;

  NetworkSpec spec_;
  std::vector<LayerInfo> info_;
  std::vector<double> params_;
};

}  // namespace flagdec::nn
