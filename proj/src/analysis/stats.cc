#include "flagdec/analysis/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flagdec {

double FitResult::stddev(size_t i) const {
  const size_t n = params.size();
  if (covariance.size() != n * n) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(std::max(0.0, covariance[i * n + i]));
}

WilsonInterval wilson_interval(uint64_t k, uint64_t n, double z2) {
  if (n < 1) throw std::invalid_argument("wilson_interval needs n >= 1");
  if (k > n) throw std::invalid_argument("wilson_interval needs k <= n");
  if (!(z2 > 0.0)) throw std::invalid_argument("z^2 must be positive");
  const double N = static_cast<double>(n);
  const double p = static_cast<double>(k) / N;
  const double z = std::sqrt(z2);
  const double center = p + z2 / (2 * N);
  const double spread = z * std::sqrt(p * (1 - p) / N + z2 / (4 * N * N));
  const double scale = 1.0 / (1.0 + z2 / N);
  WilsonInterval w;
  w.p_hat = p;
  w.p_min = (center - spread) * scale;
  w.p_max = (center + spread) * scale;
  const uint64_t reach = n > 40 ? 3 : 2;
  if (k <= reach) w.p_min = 0.0;
  if (k + reach >= n) w.p_max = 1.0;
  w.sigma = 2.0 * std::max(std::abs(p - w.p_max), std::abs(p - w.p_min));
  return w;
}

namespace {

struct Sym2 {
  double a = 0, b = 0, c = 0;  // [[a, b], [b, c]]
  bool invert(Sym2& out) const {
    const double det = a * c - b * b;
    if (!(std::abs(det) > 0) || !std::isfinite(det)) return false;
    out = {c / det, -b / det, a / det};
    return true;
  }
};

double infidelity_model(double t, double p, double t0) {
  return 0.5 - 0.5 * std::pow(1.0 - 2.0 * p, t - t0);
}

}  // namespace

FitResult fit_infidelity(const std::vector<double>& t, const std::vector<double>& y,
                         const std::vector<double>& sigma) {
  const size_t n = t.size();
  if (n < 3 || y.size() != n) throw std::invalid_argument("fit_infidelity needs >= 3 (t, I) points");
  if (!sigma.empty() && sigma.size() != n) throw std::invalid_argument("sigma size mismatch");
  std::vector<double> w(n, 1.0);
  for (size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0)) throw std::invalid_argument("sigma must be positive");
    w[i] = 1.0 / (sigma[i] * sigma[i]);
  }

  FitResult r;
  r.params = {0.0, 0.0};
  r.covariance.assign(4, 0.0);
  if (std::all_of(y.begin(), y.end(), [](double v) { return v <= 0.0; })) {
    r.converged = true;
    r.message = "flat zero infidelity";
    return r;
  }

  // Linearized start: -ln(1 - 2I) = k (t - t0) with k = -ln(1 - 2 p_L).
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    if (y[i] >= 0.5) continue;
    const double z = -std::log1p(-2.0 * y[i]);
    sw += w[i];
    sx += w[i] * t[i];
    sy += w[i] * z;
    sxx += w[i] * t[i] * t[i];
    sxy += w[i] * t[i] * z;
  }
  double k = 0.0, t0 = 0.0;
  const double den = sw * sxx - sx * sx;
  if (den > 0) {
    k = (sw * sxy - sx * sy) / den;
    const double c = (sy - k * sx) / sw;
    if (k > 0) t0 = -c / k;
  }
  double p = k > 0 ? -0.5 * std::expm1(-k) : 1e-6;
  p = std::clamp(p, 1e-12, 0.5 - 1e-12);

  auto cost = [&](double pp, double tt) {
    double s = 0;
    for (size_t i = 0; i < n; ++i) {
      const double d = y[i] - infidelity_model(t[i], pp, tt);
      s += w[i] * d * d;
    }
    return s;
  };

  double lambda = 1e-3;
  double current = cost(p, t0);
  Sym2 jtj;
  for (r.iterations = 0; r.iterations < 500; ++r.iterations) {
    jtj = {};
    double g0 = 0, g1 = 0;
    const double base = 1.0 - 2.0 * p;
    for (size_t i = 0; i < n; ++i) {
      const double e = t[i] - t0;
      const double pw = std::pow(base, e);
      const double dp = e * std::pow(base, e - 1.0);
      const double dt = 0.5 * pw * std::log(base);
      const double res = y[i] - infidelity_model(t[i], p, t0);
      jtj.a += w[i] * dp * dp;
      jtj.b += w[i] * dp * dt;
      jtj.c += w[i] * dt * dt;
      g0 += w[i] * dp * res;
      g1 += w[i] * dt * res;
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
      Sym2 damped{jtj.a * (1 + lambda), jtj.b, jtj.c * (1 + lambda)}, inv;
      if (!damped.invert(inv)) {
        lambda *= 10;
        continue;
      }
      const double step_p = inv.a * g0 + inv.b * g1;
      const double step_t = inv.b * g0 + inv.c * g1;
      const double np = std::clamp(p + step_p, 0.0, 0.5 - 1e-15);
      const double nt = t0 + step_t;
      const double next = cost(np, nt);
      if (next <= current) {
        const bool tiny = std::abs(np - p) <= 1e-15 + 1e-13 * std::abs(p) &&
                          std::abs(nt - t0) <= 1e-13 * (1 + std::abs(t0));
        p = np;
        t0 = nt;
        const double prev = current;
        current = next;
        lambda = std::max(lambda / 10, 1e-12);
        accepted = true;
        if (tiny || prev - current <= 1e-30 + 1e-15 * prev) r.converged = true;
      } else {
        lambda *= 10;
      }
    }
    if (!accepted) {
      r.converged = current <= 1e-24 || r.converged;
      break;
    }
    if (r.converged) break;
  }
  if (!r.converged) r.message = "Levenberg-Marquardt did not converge";

  r.params = {p, t0};
  r.residual = current;
  Sym2 inv;
  if (jtj.invert(inv)) {
    const double scale = sigma.empty() ? (n > 2 ? current / static_cast<double>(n - 2) : 0.0) : 1.0;
    r.covariance = {inv.a * scale, inv.b * scale, inv.b * scale, inv.c * scale};
  }
  return r;
}

FitResult fit_scaling(const std::vector<double>& p_ph, const std::vector<double>& p_l,
                      const std::vector<double>& sigma) {
  const size_t n = p_ph.size();
  if (n < 2 || p_l.size() != n) throw std::invalid_argument("fit_scaling needs >= 2 points");
  if (!sigma.empty() && sigma.size() != n) throw std::invalid_argument("sigma size mismatch");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> x(n), y(n), w(n, 1.0);
  for (size_t i = 0; i < n; ++i) {
    if (!(p_ph[i] > 0) || !(p_l[i] > 0)) throw std::invalid_argument("fit_scaling needs positive data");
    x[i] = std::log(p_ph[i]);
    y[i] = std::log(p_l[i]);
    if (!sigma.empty()) {
      const double s = sigma[i] / p_l[i];
      if (!(s > 0)) throw std::invalid_argument("sigma must be positive");
      w[i] = 1.0 / (s * s);
    }
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  const double den = sw * sxx - sx * sx;
  if (!(den > 0)) throw std::invalid_argument("fit_scaling needs distinct p_ph values");
  const double b = (sw * sxy - sx * sy) / den;
  const double c = (sy - b * sx) / sw;
  FitResult r;
  r.params = {std::exp(c), b};
  double ssr = 0;
  for (size_t i = 0; i < n; ++i) {
    const double d = y[i] - (c + b * x[i]);
    ssr += w[i] * d * d;
  }
  r.residual = ssr;
  r.converged = true;
  r.iterations = 1;
  const double scale = sigma.empty() ? (n > 2 ? ssr / static_cast<double>(n - 2) : 0.0) : 1.0;
  // Covariance of (ln a, b) mapped to (a, b) by the delta method.
  const double var_c = scale * sxx / den, var_b = scale * sw / den, cov_cb = -scale * sx / den;
  const double a = r.params[0];
  r.covariance = {a * a * var_c, a * cov_cb, a * cov_cb, var_b};
  return r;
}

}  // namespace flagdec
