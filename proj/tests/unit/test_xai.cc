#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "flagdec/xai/deepshap.h"
#include "flagdec/xai/lrp.h"
#include "flagdec/xai/shapley.h"
#include "nn_fixtures.h"

using namespace flagdec;
using namespace flagdec::xai;
using namespace flagdec::nn;
using fixtures::random_input;
using fixtures::randomize;

namespace {

// Average marginal contribution over every ordering, written out directly.
std::vector<double> permutation_shapley(const Game& g) {
  std::vector<int> order(g.players);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(g.players, 0.0);
  double count = 0;
  do {
    uint32_t S = 0;
    for (int p : order) {
      phi[p] += g.v(S | (1u << p)) - g.v(S);
      S |= 1u << p;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& v : phi) v /= count;
  return phi;
}

Game random_game(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<double> vals(1u << n);
  for (double& v : vals) v = g(rng);
  return make_game(n, [&](uint32_t S) { return vals[S]; });
}

NetworkSpec flat_spec(std::vector<int> channels, int rounds, std::vector<LayerSpec> layers) {
  NetworkSpec s;
  s.name = "flat";
  s.input_channels = std::move(channels);
  s.flatten_rounds = rounds;
  s.layers = std::move(layers);
  return s;
}

NetworkInput flat_input(int rows, int width, std::vector<double> v) {
  return NetworkInput{rows, width, rows, std::move(v)};
}

}  // namespace

TEST(ExactShapley, TwoPlayerExample) {
  const double v[4] = {0, 1, 2, 4};
  const auto phi = exact_shapley(make_game(2, [&](uint32_t S) { return v[S]; }));
  EXPECT_NEAR(phi[0], 1.5, 1e-12);
  EXPECT_NEAR(phi[1], 2.5, 1e-12);
}

TEST(ExactShapley, AgreesWithPermutationAverage) {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 7; ++n) {
    const Game g = random_game(rng, n);
    const auto a = exact_shapley(g), b = permutation_shapley(g);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
  }
}

TEST(ExactShapley, AxiomsOnRandomGames) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    const Game g = random_game(rng, n), h = random_game(rng, n);
    const auto phi = exact_shapley(g);
    const uint32_t all = (1u << n) - 1;
    EXPECT_NEAR(std::accumulate(phi.begin(), phi.end(), 0.0), g.v(all) - g.v(0), 1e-9);

    const double a = 0.7, b = -1.3;
    const auto mix = exact_shapley(make_game(n, [&](uint32_t S) { return a * g.v(S) + b * h.v(S); }));
    const auto psi = exact_shapley(h);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(mix[i], a * phi[i] + b * psi[i], 1e-9);

    const int null = static_cast<int>(rng() % n);
    const auto nphi = exact_shapley(make_game(n, [&](uint32_t S) { return g.v(S & ~(1u << null)); }));
    EXPECT_NEAR(nphi[null], 0.0, 1e-9);

    // Make players i and j interchangeable by symmetrizing over their swap.
    const int i = static_cast<int>(rng() % n);
    const int j = (i + 1 + static_cast<int>(rng() % (n - 1))) % n;
    auto swap = [&](uint32_t S) {
      const uint32_t bi = (S >> i) & 1u, bj = (S >> j) & 1u;
      S &= ~((1u << i) | (1u << j));
      return S | (bi << j) | (bj << i);
    };
    const auto sphi = exact_shapley(make_game(n, [&](uint32_t S) { return g.v(S) + g.v(swap(S)); }));
    EXPECT_NEAR(sphi[i], sphi[j], 1e-9);
  }
}

TEST(ExactShapley, RejectsLargeGames) {
  Game g;
  g.players = kMaxExactPlayers + 1;
  EXPECT_THROW(exact_shapley(g), std::invalid_argument);
}

TEST(FeatureExclusion, LinearModelGivesCenteredCoefficients) {
  const std::vector<double> beta{0.5, -2.0, 1.5, 3.0}, x{1, 0, 1, 1}, mean{0.2, 0.4, 0.9, 0.1};
  const Model f = [&](std::span<const double> z) {
    double s = 0.25;
    for (size_t i = 0; i < z.size(); ++i) s += beta[i] * z[i];
    return s;
  };
  const Game g = feature_exclusion_game(f, x, mean);
  EXPECT_NEAR(g.v(15), f(x), 1e-15);
  EXPECT_NEAR(g.v(0), f(mean), 1e-15);
  const auto phi = exact_shapley(g);
  for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(phi[i], beta[i] * (x[i] - mean[i]), 1e-12);
}

TEST(Background, MeansTreatPaddingAsZero) {
  BackgroundSet bg;
  bg.samples.push_back({2, 1, 2, {1.0, 1.0}});
  bg.samples.push_back({1, 1, 1, {0.5}});
  const auto m = bg.means(2, 1);
  EXPECT_DOUBLE_EQ(m[0], 0.75);
  EXPECT_DOUBLE_EQ(m[1], 0.5);
}

TEST(DeepShap, EqualsExactShapleyOnAffineModels) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<int> ch{0, 4, 7, 10};
    Network net(flat_spec(ch, 2, {{LayerKind::Dense, 3, Activation::Linear},
                                  {LayerKind::Dense, 1, Activation::Linear}}));
    randomize(net, rng, 1.0);
    BackgroundSet bg;
    for (int b = 0; b < 1 + trial % 7; ++b) bg.samples.push_back(random_input(rng, 4, 2, 2, trial % 2));
    const auto x = random_input(rng, 4, 2, 2, trial % 2);
    const Attribution d = deepshap(net, x, bg), e = exact_network_shapley(net, x, bg);
    for (size_t i = 0; i < d.phi.size(); ++i) EXPECT_NEAR(d.phi[i], e.phi[i], 1e-6);
    EXPECT_NEAR(d.phi0, e.phi0, 1e-9);
    EXPECT_NEAR(d.fx, e.fx, 1e-12);
  }
}

TEST(DeepShap, SummationToDeltaThroughRecurrentStack) {
  std::mt19937_64 rng(4);
  Network net(srnn_spec({8, {8, 4}, 0.2, Activation::Tanh}));
  net.initialize(rng);
  randomize(net, rng, 1.0);
  BackgroundSet bg;
  for (int b = 0; b < 20; ++b) bg.samples.push_back(random_input(rng, 12, 5, 1 + b % 5, true));
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_input(rng, 12, 6, 1 + trial % 6, trial % 3 != 0);
    const Attribution a = deepshap(net, x, bg);
    EXPECT_LT(relevance_conservation_check(a), 1e-5);
    EXPECT_TRUE(std::all_of(a.phi.begin(), a.phi.end(), [](double v) { return std::isfinite(v); }));
  }
}

TEST(DeepShap, SummationToDeltaWithReluOutputPath) {
  std::mt19937_64 rng(5);
  Network net(srnn_spec({6, {5}, 0.0, Activation::Relu}));
  randomize(net, rng, 1.0);
  BackgroundSet bg;
  for (int b = 0; b < 10; ++b) bg.samples.push_back(random_input(rng, 12, 4, 4, true));
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_input(rng, 12, 4, 4, true);
    EXPECT_LT(relevance_conservation_check(deepshap(net, x, bg)), 1e-5);
  }
}

TEST(DeepShap, PaddedRowsCarryNoAttribution) {
  std::mt19937_64 rng(6);
  Network net(srnn_spec({6, {5}, 0.0, Activation::Tanh}));
  randomize(net, rng, 1.0);
  BackgroundSet bg;
  for (int b = 0; b < 5; ++b) bg.samples.push_back(random_input(rng, 12, 6, 6, true));
  auto x = random_input(rng, 12, 3, 3, true);
  const Attribution tight = deepshap(net, x, bg);
  x.rows = 6;
  x.values.resize(6 * 12, 0.0);
  for (size_t i = 3 * 12; i < x.values.size(); ++i) x.values[i] = 1.0;
  const Attribution padded = deepshap(net, x, bg);
  EXPECT_EQ(padded.rounds, 3);
  for (size_t i = 0; i < tight.phi.size(); ++i) EXPECT_NEAR(padded.phi[i], tight.phi[i], 1e-14);
  EXPECT_NEAR(padded.phi0, tight.phi0, 1e-14);
}

TEST(DeepShap, InputEqualToBackgroundGetsZero) {
  std::mt19937_64 rng(7);
  Network net(srnn_spec({6, {5}, 0.0, Activation::Tanh}));
  randomize(net, rng, 1.0);
  const auto x = random_input(rng, 12, 3, 3, true);
  BackgroundSet bg;
  bg.samples = {x, x};
  const Attribution a = deepshap(net, x, bg);
  for (double v : a.phi) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(a.phi0, a.fx, 1e-15);
}

TEST(DeepShap, BatchMatchesSingleCalls) {
  std::mt19937_64 rng(8);
  Network net(drnn_spec({6, {5}, 0.0, Activation::Tanh}));
  randomize(net, rng, 1.0);
  BackgroundSet bg;
  for (int b = 0; b < 4; ++b) bg.samples.push_back(random_input(rng, 12, 3, 3, true));
  std::vector<NetworkInput> xs;
  for (int i = 0; i < 12; ++i) xs.push_back(random_input(rng, 12, 3, 1 + i % 3, true));
  xs.push_back(xs[0]);
  const auto batch = deepshap_batch(net, xs, bg, 1, 3);
  ASSERT_EQ(batch.size(), xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    const Attribution one = deepshap(net, xs[i], bg, 1);
    EXPECT_EQ(batch[i].phi, one.phi);
    EXPECT_EQ(batch[i].phi0, one.phi0);
  }
}

TEST(Lrp, SingleLayerExample) {
  Network net(flat_spec({0, 1}, 1, {{LayerKind::Dense, 1, Activation::Linear}}));
  net.parameters() = {1.0, 3.0, 0.0};
  const LrpResult r = lrp(net, flat_input(1, 2, {1.0, 1.0}), {LrpRuleKind::Zero},
                          {InputRuleKind::Hidden});
  ASSERT_EQ(r.attribution.fx, 4.0);
  EXPECT_NEAR(r.attribution.at(0, 0) / r.attribution.fx, 0.25, 1e-15);
  EXPECT_NEAR(r.attribution.at(0, 1) / r.attribution.fx, 0.75, 1e-15);
}

TEST(Lrp, AlphaOneBetaZeroUsesPositivePartsOnly) {
  Network net(flat_spec({0, 1, 2}, 1, {{LayerKind::Dense, 1, Activation::Relu}}));
  net.parameters() = {2.0, -1.0, 0.5, 0.0};
  const LrpResult r = lrp(net, flat_input(1, 3, {1.0, 1.0, 2.0}), {}, {InputRuleKind::Hidden});
  EXPECT_NEAR(r.attribution.fx, 2.0, 1e-15);
  EXPECT_NEAR(r.attribution.at(0, 0), 2.0 * 2.0 / 3.0, 1e-15);
  EXPECT_EQ(r.attribution.at(0, 1), 0.0);
  EXPECT_NEAR(r.attribution.at(0, 2), 2.0 * 1.0 / 3.0, 1e-15);
}

TEST(Lrp, PixelBoundsReachZeroInputs) {
  Network net(flat_spec({0, 1}, 1, {{LayerKind::Dense, 1, Activation::Linear}}));
  net.parameters() = {-1.0, 2.0, 0.0};
  const auto x = flat_input(1, 2, {0.0, 1.0});
  const LrpResult eps = lrp(net, x, {LrpRuleKind::Epsilon}, {InputRuleKind::Hidden});
  EXPECT_EQ(eps.attribution.at(0, 0), 0.0);
  const LrpResult bounds = lrp(net, x, {}, {InputRuleKind::PixelBounds, 0.0, 1.0});
  EXPECT_NE(bounds.attribution.at(0, 0), 0.0);
  EXPECT_NEAR(bounds.attribution.sum(), bounds.attribution.fx, 1e-12);
  const LrpResult sq = lrp(net, x, {}, {InputRuleKind::SquaredWeights});
  EXPECT_NEAR(sq.attribution.at(0, 0), 2.0 * 1.0 / 5.0, 1e-15);
}

TEST(Lrp, ZeroRuleConservesWithoutBiases) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Network net(flat_spec({0, 1, 2, 3, 4, 5}, 2, {{LayerKind::Dense, 7, Activation::Relu},
                                                 {LayerKind::Dropout, 0, Activation::Linear, false, 0.3},
                                                 {LayerKind::Dense, 4, Activation::Relu},
                                                 {LayerKind::Dense, 1, Activation::Linear}}));
    randomize(net, rng, 1.0);
    for (const auto& l : net.layers())
      if (l.kind == LayerKind::Dense)
        std::fill_n(net.parameters().begin() + l.offset + l.in * l.out, l.out, 0.0);
    const auto x = random_input(rng, 6, 2, 2);
    const LrpResult r = lrp(net, x, {LrpRuleKind::Zero}, {InputRuleKind::Hidden});
    ASSERT_EQ(r.layer_sums.size(), 4u);
    EXPECT_LT(relevance_conservation_check(r), 1e-9);
  }
}

TEST(Lrp, EpsilonAbsorbsMoreRelevanceAsItGrows) {
  std::mt19937_64 rng(10);
  Network net(flat_spec({0, 1, 2, 3}, 1, {{LayerKind::Dense, 5, Activation::Tanh},
                                         {LayerKind::Dense, 1, Activation::Linear}}));
  randomize(net, rng, 1.0);
  for (const auto& l : net.layers())
    std::fill_n(net.parameters().begin() + l.offset + l.in * l.out, l.out, 0.0);
  const auto x = random_input(rng, 4, 1, 1);
  double last = -1.0;
  for (double e : {1e-6, 1e-2, 1e-1, 1.0}) {
    LrpRule rule{LrpRuleKind::Epsilon};
    rule.epsilon = e;
    const double res = relevance_conservation_check(lrp(net, x, rule, {InputRuleKind::Hidden}));
    EXPECT_GT(res, last);
    last = res;
  }
}

TEST(Lrp, GammaFavorsPositiveWeights) {
  Network net(flat_spec({0, 1}, 1, {{LayerKind::Dense, 1, Activation::Linear}}));
  net.parameters() = {1.0, -0.5, 0.0};
  LrpRule rule{LrpRuleKind::Gamma};
  rule.gamma = 1.0;
  const LrpResult r = lrp(net, flat_input(1, 2, {1.0, 1.0}), rule, {InputRuleKind::Hidden});
  // Weights become (2, -0.5): shares 2/1.5 and -0.5/1.5 of f(x) = 0.5.
  EXPECT_NEAR(r.attribution.at(0, 0), 0.5 * 2.0 / 1.5, 1e-15);
  EXPECT_NEAR(r.attribution.at(0, 1), -0.5 * 0.5 / 1.5, 1e-15);
}

TEST(Lrp, RejectsRecurrentNetworks) {
  std::mt19937_64 rng(11);
  Network net(srnn_spec({4, {4}, 0.0, Activation::Tanh}));
  EXPECT_THROW(lrp(net, random_input(rng, 12, 2, 2)), std::invalid_argument);
}
