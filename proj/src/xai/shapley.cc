#include "flagdec/xai/shapley.h"

#include <bit>
#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "flagdec/circuit.h"

namespace flagdec::xai {

Game make_game(int players, const std::function<double(uint32_t)>& v) {
  if (players < 0 || players > kMaxExactPlayers)
    throw std::invalid_argument("exact games support at most 20 players");
  Game g;
  g.players = players;
  g.values.resize(size_t{1} << players);
  for (uint32_t s = 0; s < g.values.size(); ++s) g.values[s] = v(s);
  return g;
}

std::vector<double> exact_shapley(const Game& game) {
  const int n = game.players;
  if (n < 0 || n > kMaxExactPlayers) throw std::invalid_argument("player set too large for exact Shapley");
  if (game.values.size() != (size_t{1} << n)) throw std::invalid_argument("game table has wrong size");
  std::vector<double> phi(static_cast<size_t>(n), 0.0);
  if (n == 0) return phi;
  // weight[s] = s! (n-s-1)! / n!
  std::vector<double> weight(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s)
    weight[s] = std::exp(std::lgamma(s + 1.0) + std::lgamma(n - s + 0.0) - std::lgamma(n + 1.0));
  const uint32_t full = static_cast<uint32_t>(game.values.size());
  for (uint32_t S = 0; S < full; ++S) {
    const int k = std::popcount(S);
    if (k == n) continue;
    const double vs = game.values[S];
    const double w = weight[k];
    for (int i = 0; i < n; ++i) {
      const uint32_t bit = 1u << i;
      if (S & bit) continue;
      phi[i] += w * (game.values[S | bit] - vs);
    }
  }
  return phi;
}

std::vector<double> BackgroundSet::means(int rows, int width) const {
  if (samples.empty()) throw std::invalid_argument("background set is empty");
  std::vector<double> m(static_cast<size_t>(rows) * width, 0.0);
  for (const auto& s : samples) {
    if (s.width != width) throw std::invalid_argument("background width mismatch");
    const int r = std::min(rows, s.length);
    for (int t = 0; t < r; ++t)
      for (int c = 0; c < width; ++c) m[static_cast<size_t>(t) * width + c] += s.at(t, c);
  }
  for (double& v : m) v /= static_cast<double>(samples.size());
  return m;
}

Game feature_exclusion_game(const Model& model, std::span<const double> x,
                            std::span<const double> means) {
  const int n = static_cast<int>(x.size());
  if (means.size() != x.size()) throw std::invalid_argument("means size mismatch");
  if (n > kMaxExactPlayers) throw std::invalid_argument("too many features for an exact game");
  std::vector<double> buf(x.size());
  return make_game(n, [&](uint32_t S) {
    for (int i = 0; i < n; ++i) buf[i] = ((S >> i) & 1) ? x[i] : means[i];
    return model(buf);
  });
}

Game feature_exclusion_game(const Model& model, std::span<const double> x,
                            const BackgroundSet& background, int rows, int width) {
  const auto m = background.means(rows, width);
  return feature_exclusion_game(model, x, m);
}

Model network_model(const nn::Network& net, const nn::NetworkInput& like, int head) {
  auto cache = std::make_shared<nn::ForwardCache>();
  auto input = std::make_shared<nn::NetworkInput>(like);
  return [&net, cache, input, head](std::span<const double> flat) {
    if (flat.size() != input->values.size()) throw std::invalid_argument("model input size");
    std::copy(flat.begin(), flat.end(), input->values.begin());
    return net.forward(*input, nn::Mode::Eval, nullptr, *cache)[static_cast<size_t>(head)];
  };
}

double Attribution::sum() const {
  double s = 0.0;
  for (double v : phi) s += v;
  return s;
}

Attribution to_channel_grid(const nn::NetworkSpec& spec, const nn::NetworkInput& x,
                            std::span<const double> flat, double phi0, double fx) {
  Attribution a;
  a.rounds = x.length;
  a.phi0 = phi0;
  a.fx = fx;
  a.phi.assign(static_cast<size_t>(a.rounds) * kChannels, 0.0);
  for (int t = 0; t < a.rounds; ++t)
    for (int k = 0; k < x.width; ++k)
      a.phi[static_cast<size_t>(t) * kChannels + spec.input_channels[k]] =
          flat[static_cast<size_t>(t) * x.width + k];
  return a;
}

Attribution exact_network_shapley(const nn::Network& net, const nn::NetworkInput& x,
                                  const BackgroundSet& background, int head) {
  const int used = x.length * x.width;
  if (used > kMaxExactPlayers) throw std::invalid_argument("too many features for exact Shapley");
  const auto means = background.means(x.rows, x.width);
  Model f = network_model(net, x, head);
  // Players are the unmasked features; padded rows stay at their (zero) input values.
  std::vector<double> base = x.values;
  Game g = make_game(used, [&](uint32_t S) {
    std::vector<double> in = base;
    for (int i = 0; i < used; ++i) in[i] = ((S >> i) & 1) ? x.values[i] : means[i];
    return f(in);
  });
  std::vector<double> phi = exact_shapley(g);
  phi.resize(x.values.size(), 0.0);
  return to_channel_grid(net.spec(), x, phi, g.v(0), g.v((1u << used) - 1));
}

}  // namespace flagdec::xai
