#include "flagdec/nn/loss.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flagdec::nn {

namespace {

double clamped_bce(double p, double q) {
  q = std::clamp(q, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return -(p * std::log(q) + (1.0 - p) * std::log(1.0 - q));
}

}  // namespace

double bce_loss(int p, double q) {
  if (p != 0 && p != 1) throw std::domain_error("BCE label must be 0 or 1");
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("BCE probability must lie in (0,1)");
  return clamped_bce(p, q);
}

double masked_bce_loss(std::span<const double> labels, uint8_t mask, std::span<const double> q) {
  if (labels.size() != q.size()) throw std::invalid_argument("label/output size mismatch");
  double loss = 0.0;
  bool any = false;
  for (size_t h = 0; h < q.size(); ++h) {
    if (!((mask >> h) & 1)) continue;
    any = true;
    if (!(q[h] >= 0.0 && q[h] <= 1.0)) throw std::domain_error("output outside [0,1]");
    loss += clamped_bce(labels[h], q[h]);
  }
  if (!any) throw std::invalid_argument("every head is masked");
  return loss;
}

void masked_bce_logit_gradient(std::span<const double> labels, uint8_t mask,
                               std::span<const double> q, std::span<double> out) {
  for (size_t h = 0; h < q.size(); ++h) out[h] = ((mask >> h) & 1) ? q[h] - labels[h] : 0.0;
}

}  // namespace flagdec::nn
