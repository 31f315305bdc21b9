#include "flagdec/xai/lrp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flagdec::xai {

namespace {

double pos(double v) { return v > 0.0 ? v : 0.0; }
double neg(double v) { return v < 0.0 ? v : 0.0; }
double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

// K is in x out, input-major.
std::vector<double> redistribute(const double* K, const double* b, size_t in, size_t out,
                                 const std::vector<double>& a, const std::vector<double>& R,
                                 const LrpRule& rule) {
  std::vector<double> Rin(in, 0.0);
  auto w = [&](size_t i, size_t j) { return K[i * out + j]; };
  for (size_t j = 0; j < out; ++j) {
    if (R[j] == 0.0) continue;
    switch (rule.kind) {
      case LrpRuleKind::Zero:
      case LrpRuleKind::Epsilon: {
        double z = b[j];
        for (size_t i = 0; i < in; ++i) z += a[i] * w(i, j);
        if (rule.kind == LrpRuleKind::Epsilon) z += rule.epsilon * (z >= 0.0 ? 1.0 : -1.0);
        const double s = safe_div(R[j], z);
        for (size_t i = 0; i < in; ++i) Rin[i] += a[i] * w(i, j) * s;
        break;
      }
      case LrpRuleKind::Gamma: {
        double z = b[j] + rule.gamma * pos(b[j]);
        for (size_t i = 0; i < in; ++i) z += a[i] * (w(i, j) + rule.gamma * pos(w(i, j)));
        const double s = safe_div(R[j], z);
        for (size_t i = 0; i < in; ++i) Rin[i] += a[i] * (w(i, j) + rule.gamma * pos(w(i, j))) * s;
        break;
      }
      case LrpRuleKind::AlphaBeta: {
        double zp = pos(b[j]), zn = neg(b[j]);
        for (size_t i = 0; i < in; ++i) {
          const double c = a[i] * w(i, j);
          zp += pos(c);
          zn += neg(c);
        }
        const double sp = rule.alpha * safe_div(R[j], zp);
        const double sn = rule.beta * safe_div(R[j], zn);
        for (size_t i = 0; i < in; ++i) {
          const double c = a[i] * w(i, j);
          Rin[i] += pos(c) * sp - neg(c) * sn;
        }
        break;
      }
    }
  }
  return Rin;
}

std::vector<double> redistribute_input(const double* K, size_t in, size_t out,
                                       const std::vector<double>& x, const std::vector<double>& R,
                                       const InputRule& rule) {
  std::vector<double> Rin(in, 0.0);
  for (size_t j = 0; j < out; ++j) {
    if (R[j] == 0.0) continue;
    double z = 0.0;
    for (size_t i = 0; i < in; ++i) {
      const double w = K[i * out + j];
      z += rule.kind == InputRuleKind::SquaredWeights
               ? w * w
               : x[i] * w - rule.low * pos(w) - rule.high * neg(w);
    }
    const double s = safe_div(R[j], z);
    for (size_t i = 0; i < in; ++i) {
      const double w = K[i * out + j];
      const double c = rule.kind == InputRuleKind::SquaredWeights
                           ? w * w
                           : x[i] * w - rule.low * pos(w) - rule.high * neg(w);
      Rin[i] += c * s;
    }
  }
  return Rin;
}

double total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

LrpResult lrp(const nn::Network& net, const nn::NetworkInput& x, const LrpRule& rule,
              const InputRule& input_rule, int head) {
  const auto& layers = net.layers();
  for (const auto& l : layers)
    if (l.kind == nn::LayerKind::Lstm) throw std::invalid_argument("LRP is defined for dense networks only");
  const size_t outs = static_cast<size_t>(net.spec().output_size());
  if (head < 0 || static_cast<size_t>(head) >= outs) throw std::invalid_argument("bad head");

  nn::ForwardCache cache;
  const double fx = net.forward(x, nn::Mode::Eval, nullptr, cache)[static_cast<size_t>(head)];
  std::vector<double> R(outs, 0.0);
  R[static_cast<size_t>(head)] = fx;

  size_t first_dense = layers.size();
  for (size_t li = 0; li < layers.size(); ++li)
    if (layers[li].kind == nn::LayerKind::Dense) {
      first_dense = li;
      break;
    }

  LrpResult res;
  res.layer_sums.push_back(total(R));
  for (size_t li = layers.size(); li-- > 0;) {
    const auto& info = layers[li];
    if (info.kind != nn::LayerKind::Dense) continue;
    const auto& lc = cache.layers[li];
    const double* K = net.parameters().data() + info.offset;
    const double* b = K + info.in * info.out;
    if (li == first_dense && input_rule.kind != InputRuleKind::Hidden) {
      R = redistribute_input(K, info.in, info.out, lc.in, R, input_rule);
    } else {
      R = redistribute(K, b, info.in, info.out, lc.in, R, rule);
    }
    res.layer_sums.push_back(total(R));
  }
  res.attribution = to_channel_grid(net.spec(), x, R, 0.0, fx);
  return res;
}

double relevance_conservation_check(const LrpResult& r) {
  if (r.layer_sums.empty()) return 0.0;
  double worst = 0.0;
  for (double s : r.layer_sums) worst = std::max(worst, std::abs(s - r.layer_sums.front()));
  return worst;
}

}  // namespace flagdec::xai
