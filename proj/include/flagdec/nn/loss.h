#pragma once

#include <cstdint>
#include <span>

namespace flagdec::nn {

inline constexpr double kProbabilityClamp = 1e-7;

// -(p ln q + (1-p) ln(1-q)) with q clamped to [1e-7, 1 - 1e-7]. Throws std::domain_error
// unless 0 < q < 1 and p in {0, 1}.
double bce_loss(int p, double q);

// Sum of BCE over heads whose bit is set in `mask`; at least one head must be unmasked.
double masked_bce_loss(std::span<const double> labels, uint8_t mask, std::span<const double> q);

// Gradient of the masked BCE with respect to the sigmoid pre-activations: q - p on unmasked
// heads, exactly zero on masked ones.
void masked_bce_logit_gradient(std::span<const double> labels, uint8_t mask,
                               std::span<const double> q, std::span<double> out);

}  // namespace flagdec::nn
