#include "flagdec/nn/adam.h"

#include <cmath>
#include <stdexcept>

#include "flagdec/kernels.h"

namespace flagdec::nn {

void AdamState::reset(size_t n) {
  m.assign(n, 0.0);
  v.assign(n, 0.0);
  step = 0;
}

void adam_update(AdamState& s, std::span<double> w, std::span<const double> g) {
  if (w.size() != g.size()) throw std::invalid_argument("adam: gradient size mismatch");
  if (s.m.size() != w.size()) s.reset(w.size());
  ++s.step;
  const double tau = static_cast<double>(s.step);
  const double c1 = 1.0 - std::pow(s.config.beta1, tau);
  const double c2 = 1.0 - std::pow(s.config.beta2, tau);
  kernels::active().adam(w.data(), g.data(), s.m.data(), s.v.data(), w.size(),
                         s.config.learning_rate, s.config.beta1, s.config.beta2, s.config.epsilon,
                         c1, c2);
}

}  // namespace flagdec::nn
