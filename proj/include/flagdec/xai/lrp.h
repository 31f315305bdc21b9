#pragma once

#include <vector>

#include "flagdec/xai/shapley.h"

namespace flagdec::xai {

enum class LrpRuleKind { Zero, Epsilon, Gamma, AlphaBeta };
enum class InputRuleKind { Hidden, PixelBounds, SquaredWeights };

struct LrpRule {
  LrpRuleKind kind = LrpRuleKind::AlphaBeta;
  double epsilon = 1e-6;
  double gamma = 0.25;
  double alpha = 1.0;
  double beta = 0.0;
};

// Rule for the first dense layer. Hidden reuses the hidden-layer rule.
struct InputRule {
  InputRuleKind kind = InputRuleKind::PixelBounds;
  double low = 0.0;
  double high = 1.0;
};

struct LrpResult {
  Attribution attribution;
  // Total relevance at each dense-layer boundary, output side first, input last.
  std::vector<double> layer_sums;
};

// Dense networks only (masking and dropout pass through); throws std::invalid_argument on LSTM.
// Relevance starts as f(x) on the chosen head.
LrpResult lrp(const nn::Network& net, const nn::NetworkInput& x, const LrpRule& rule = {},
              const InputRule& input_rule = {}, int head = 0);

// Largest deviation of a layer total from the output relevance.
double relevance_conservation_check(const LrpResult& r);

}  // namespace flagdec::xai
