#include "flagdec/xai/deepshap.h"

#include <cmath>
#include <map>
#include <stdexcept>

#include "flagdec/parallel.h"

namespace flagdec::xai {

nn::NetworkInput reference_for(const nn::NetworkInput& x, const nn::NetworkInput& b) {
  if (x.width != b.width) throw std::invalid_argument("background width mismatch");
  nn::NetworkInput r;
  r.rows = x.rows;
  r.width = x.width;
  r.length = x.length;
  r.values.assign(x.values.size(), 0.0);
  const int rows = std::min(x.length, b.length);
  for (int t = 0; t < rows; ++t)
    for (int c = 0; c < x.width; ++c)
      r.values[static_cast<size_t>(t) * x.width + c] = b.at(t, c);
  return r;
}

Attribution deepshap(const nn::Network& net, const nn::NetworkInput& x,
                     const BackgroundSet& background, int head) {
  if (background.samples.empty()) throw std::invalid_argument("background set is empty");
  const size_t outs = static_cast<size_t>(net.spec().output_size());
  if (head < 0 || static_cast<size_t>(head) >= outs) throw std::invalid_argument("bad head");
  nn::ForwardCache cx, cr;
  const double fx = net.forward(x, nn::Mode::Eval, nullptr, cx)[static_cast<size_t>(head)];
  std::vector<double> d_out(outs, 0.0);
  d_out[static_cast<size_t>(head)] = 1.0;
  std::vector<double> phi(x.values.size(), 0.0), m(x.values.size());
  double fb = 0.0;
  for (const auto& b : background.samples) {
    const nn::NetworkInput ref = reference_for(x, b);
    fb += net.forward(ref, nn::Mode::Eval, nullptr, cr)[static_cast<size_t>(head)];
    std::fill(m.begin(), m.end(), 0.0);
    net.backward_multipliers(cx, cr, d_out, m);
    for (size_t i = 0; i < phi.size(); ++i) phi[i] += m[i] * (x.values[i] - ref.values[i]);
  }
  const double nb = static_cast<double>(background.samples.size());
  for (double& v : phi) v /= nb;
  return to_channel_grid(net.spec(), x, phi, fb / nb, fx);
}

std::vector<Attribution> deepshap_batch(const nn::Network& net,
                                        const std::vector<nn::NetworkInput>& inputs,
                                        const BackgroundSet& background, int head, int threads) {
  std::map<std::pair<int, std::vector<double>>, size_t> index;
  std::vector<size_t> slot(inputs.size());
  std::vector<size_t> unique;
  for (size_t i = 0; i < inputs.size(); ++i) {
    auto [it, fresh] = index.try_emplace({inputs[i].length, inputs[i].values}, unique.size());
    if (fresh) unique.push_back(i);
    slot[i] = it->second;
  }
  std::vector<Attribution> distinct(unique.size());
  parallel_for(unique.size(), threads, [&](size_t begin, size_t end) {
    for (size_t u = begin; u < end; ++u) distinct[u] = deepshap(net, inputs[unique[u]], background, head);
  });
  std::vector<Attribution> out(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) out[i] = distinct[slot[i]];
  return out;
}

double relevance_conservation_check(const Attribution& a) {
  return std::abs(a.sum() - (a.fx - a.phi0));
}

}  // namespace flagdec::xai
