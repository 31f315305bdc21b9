#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flagdec/frame_sim.h"

namespace flagdec::nn {

enum class Activation : uint8_t { Linear, Relu, Sigmoid, Tanh };
enum class LayerKind : uint8_t { Masking, Lstm, Dense, Dropout };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& s);

struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  int units = 0;
  // Dense: output nonlinearity. Lstm: nonlinearity of the output path H = O * act(C).
  Activation activation = Activation::Linear;
  bool return_sequences = false;  // Lstm only
  double rate = 0.0;              // Dropout only

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct NetworkSpec {
  std::string name;
  std::vector<int> input_channels;  // channels fed per round, in order
  int flatten_rounds = 0;           // > 0: no recurrence, that many rounds concatenated
  std::vector<LayerSpec> layers;

  int round_width() const { return static_cast<int>(input_channels.size()); }
  int input_size() const;  // flattened feature count (per round for recurrent nets)
  int output_size() const;
  bool recurrent() const { return flatten_rounds == 0; }
  // Throws std::invalid_argument on incompatible layer sequences.
  void validate() const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct ArchitectureWidths {
  int lstm = 36;
  std::vector<int> dense{48, 24, 12};
  double dropout = 0.2;
  Activation lstm_output = Activation::Tanh;
};

// Single-output recurrent decoder on all 12 channels.
NetworkSpec srnn_spec(const ArchitectureWidths& w = {});
// Two sigmoid heads: output 0 predicts bit flips (Z readout), output 1 phase flips (X readout).
NetworkSpec drnn_spec(const ArchitectureWidths& w = {});
// Feed-forward decoder over S_Z and F_X of exactly two rounds.
NetworkSpec dnn2_spec(const ArchitectureWidths& w = {});

// Output head used for a readout basis.
int head_for_basis(const NetworkSpec& spec, Basis basis);

// Rows x width feature matrix; rows beyond `length` are masked padding.
struct NetworkInput {
  int rows = 0;
  int width = 0;
  int length = 0;
  std::vector<double> values;

  double at(int r, int c) const { return values[static_cast<size_t>(r) * width + c]; }
};

// pad_rows > T pads recurrent inputs with masked zero rows.
NetworkInput encode_volume(const NetworkSpec& spec, const SyndromeFlagVolume& volume,
                           int pad_rows = 0);

}  // namespace flagdec::nn
