#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "flagdec/nn/network.h"

namespace flagdec::xai {

inline constexpr int kMaxExactPlayers = 20;

// Characteristic function tabulated over all coalitions; bit i of the index is player i.
struct Game {
  int players = 0;
  std::vector<double> values;

  double v(uint32_t coalition) const { return values[coalition]; }
};

Game make_game(int players, const std::function<double(uint32_t)>& v);

// Average marginal contribution over all orderings, via the subset-weight form.
std::vector<double> exact_shapley(const Game& game);

using Model = std::function<double(std::span<const double>)>;

// Background inputs for one network; padded rows count as zeros in the means.
struct BackgroundSet {
  std::vector<nn::NetworkInput> samples;

  size_t size() const { return samples.size(); }
  // Per-feature means over a rows x width grid.
  std::vector<double> means(int rows, int width) const;
};

// v(S) = f(x_S, E[x]_{not S}).
Game feature_exclusion_game(const Model& model, std::span<const double> x,
                            std::span<const double> means);
Game feature_exclusion_game(const Model& model, std::span<const double> x,
                            const BackgroundSet& background, int rows, int width);

// Model over flat features shaped like `like` (rows, width, mask length), reading one head.
Model network_model(const nn::Network& net, const nn::NetworkInput& like, int head = 0);

// Per-input attributions on the fixed rows x 12 channel grid.
struct Attribution {
  int rounds = 0;
  std::vector<double> phi;  // rounds x kChannels
  double phi0 = 0.0;        // baseline value
  double fx = 0.0;          // model output on the explained input

  double at(int t, int c) const { return phi[static_cast<size_t>(t) * 12 + c]; }
  double sum() const;
};

// Scatters flat per-feature values (rows x width) onto the channel grid of the spec.
Attribution to_channel_grid(const nn::NetworkSpec& spec, const nn::NetworkInput& x,
                            std::span<const double> flat, double phi0, double fx);

// Exact Shapley attribution of a network via the feature-exclusion game (<= 20 features).
Attribution exact_network_shapley(const nn::Network& net, const nn::NetworkInput& x,
                                  const BackgroundSet& background, int head = 0);

}  // namespace flagdec::xai
