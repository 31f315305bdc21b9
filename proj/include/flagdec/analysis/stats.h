#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flagdec {

struct WilsonInterval {
  double p_hat = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  double sigma = 0.0;  // symmetrized: 2 * max deviation of the bounds from p_hat
};

// Wilson score interval with the fringe cutoffs at l in {0,1,2} (and 3 when n > 40).
WilsonInterval wilson_interval(uint64_t k, uint64_t n, double z2 = 1.0);

struct FitResult {
  std::vector<double> params;      // (p_L, t0) or (a, b)
  std::vector<double> covariance;  // row-major, params.size()^2
  double residual = 0.0;           // weighted sum of squared residuals
  bool converged = false;
  int iterations = 0;
  std::string message;

  double param(size_t i) const { return params.at(i); }
  double stddev(size_t i) const;
};

// Least-squares fit of I(t) = 1/2 - 1/2 (1 - 2 p_L)^(t - t0). Optional per-point sigma weights.
FitResult fit_infidelity(const std::vector<double>& t, const std::vector<double>& infidelity,
                         const std::vector<double>& sigma = {});

// Log-log least squares of p_L = a * p^b. Optional sigma of p_L per point.
FitResult fit_scaling(const std::vector<double>& p_ph, const std::vector<double>& p_l,
                      const std::vector<double>& sigma = {});

}  // namespace flagdec
