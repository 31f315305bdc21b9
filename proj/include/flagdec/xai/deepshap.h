#pragma once

#include "flagdec/xai/shapley.h"

namespace flagdec::xai {

// Background sample b re-shaped to x: same rows and mask length, rows beyond b's own length zero.
nn::NetworkInput reference_for(const nn::NetworkInput& x, const nn::NetworkInput& b);

// DeepLIFT-rescale attributions averaged over the background references.
// phi_i = mean_b m_i(x, b) (x_i - b_i); phi0 = mean_b f(b).
Attribution deepshap(const nn::Network& net, const nn::NetworkInput& x,
                     const BackgroundSet& background, int head = 0);

// Batch version; identical inputs are attributed once.
std::vector<Attribution> deepshap_batch(const nn::Network& net,
                                        const std::vector<nn::NetworkInput>& inputs,
                                        const BackgroundSet& background, int head = 0,
                                        int threads = 0);

// |sum phi - (f(x) - phi0)|.
double relevance_conservation_check(const Attribution& a);

}  // namespace flagdec::xai
