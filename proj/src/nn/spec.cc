#include "flagdec/nn/spec.h"

#include <algorithm>
#include <stdexcept>

namespace flagdec::nn {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Linear: return "linear";
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
  }
  return "?";
}

Activation activation_from_name(const std::string& s) {
  if (s == "linear") return Activation::Linear;
  if (s == "relu") return Activation::Relu;
  if (s == "sigmoid") return Activation::Sigmoid;
  if (s == "tanh") return Activation::Tanh;
  throw std::invalid_argument("unknown activation: " + s);
}

int NetworkSpec::input_size() const {
  return recurrent() ? round_width() : round_width() * flatten_rounds;
}

int NetworkSpec::output_size() const {
  for (auto it = layers.rbegin(); it != layers.rend(); ++it)
    if (it->kind == LayerKind::Dense || it->kind == LayerKind::Lstm) return it->units;
  return input_size();
}

void NetworkSpec::validate() const {
  if (input_channels.empty()) throw std::invalid_argument("network has no input channels");
  for (int c : input_channels)
    if (c < 0 || c >= kChannels) throw std::invalid_argument("input channel out of range");
  if (flatten_rounds < 0) throw std::invalid_argument("flatten_rounds must be >= 0");
  bool sequence = recurrent();
  for (size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    switch (l.kind) {
      case LayerKind::Masking:
        if (i != 0) throw std::invalid_argument("masking must be the first layer");
        break;
      case LayerKind::Lstm:
        if (!sequence) throw std::invalid_argument("LSTM layer needs a sequence input");
        if (l.units < 1) throw std::invalid_argument("LSTM needs units >= 1");
        if (l.activation != Activation::Tanh && l.activation != Activation::Relu)
          throw std::invalid_argument("LSTM output activation must be tanh or relu");
        sequence = l.return_sequences;
        break;
      case LayerKind::Dense:
        if (sequence) throw std::invalid_argument("dense layer after a sequence output");
        if (l.units < 1) throw std::invalid_argument("dense layer needs units >= 1");
        break;
      case LayerKind::Dropout:
        if (sequence) throw std::invalid_argument("dropout after a sequence output");
        if (!(l.rate >= 0.0 && l.rate < 1.0)) throw std::invalid_argument("dropout rate in [0,1)");
        break;
    }
  }
  if (sequence) throw std::invalid_argument("network must end in a vector output");
  if (layers.empty() || layers.back().kind != LayerKind::Dense)
    throw std::invalid_argument("network must end in a dense layer");
}

namespace {

void append_tail(NetworkSpec& s, const ArchitectureWidths& w, int outputs) {
  for (int units : w.dense) {
    s.layers.push_back({LayerKind::Dense, units, Activation::Relu});
    s.layers.push_back({LayerKind::Dropout, 0, Activation::Linear, false, w.dropout});
  }
  s.layers.push_back({LayerKind::Dense, outputs, Activation::Sigmoid});
}

NetworkSpec recurrent_spec(const ArchitectureWidths& w, int outputs, const char* name) {
  NetworkSpec s;
  s.name = name;
  for (int c = 0; c < kChannels; ++c) s.input_channels.push_back(c);
  s.layers.push_back({LayerKind::Masking});
  s.layers.push_back({LayerKind::Lstm, w.lstm, w.lstm_output, true});
  s.layers.push_back({LayerKind::Lstm, w.lstm, w.lstm_output, false});
  append_tail(s, w, outputs);
  return s;
}

}  // namespace

NetworkSpec srnn_spec(const ArchitectureWidths& w) { return recurrent_spec(w, 1, "srnn"); }
NetworkSpec drnn_spec(const ArchitectureWidths& w) { return recurrent_spec(w, 2, "drnn"); }

NetworkSpec dnn2_spec(const ArchitectureWidths& w) {
  NetworkSpec s;
  s.name = "dnn2";
  s.input_channels = {kChannelSZ, kChannelSZ + 1, kChannelSZ + 2,
                      kChannelFX, kChannelFX + 1, kChannelFX + 2};
  s.flatten_rounds = 2;
  append_tail(s, w, 1);
  return s;
}

int head_for_basis(const NetworkSpec& spec, Basis basis) {
  return spec.output_size() >= 2 && basis == Basis::X ? 1 : 0;
}

NetworkInput encode_volume(const NetworkSpec& spec, const SyndromeFlagVolume& volume,
                           int pad_rows) {
  const int T = volume.size();
  if (T < 1) throw std::invalid_argument("empty syndrome volume");
  NetworkInput in;
  in.width = spec.round_width();
  if (spec.recurrent()) {
    in.rows = std::max(T, pad_rows);
    in.length = T;
  } else {
    if (T != spec.flatten_rounds)
      throw std::invalid_argument("feed-forward decoder expects exactly " +
                                  std::to_string(spec.flatten_rounds) + " rounds");
    in.rows = T;
    in.length = T;
  }
  in.values.assign(static_cast<size_t>(in.rows) * in.width, 0.0);
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < in.width; ++k)
      in.values[static_cast<size_t>(t) * in.width + k] = volume.at(t, spec.input_channels[k]);
  return in;
}

}  // namespace flagdec::nn
