#include <cmath>

#include "flagdec/kernels.h"

namespace flagdec::kernels {

namespace {

void affine_forward(const double* K, size_t in, size_t out, const double* x, double* y) {
  for (size_t i = 0; i < in; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = K + i * out;
    for (size_t j = 0; j < out; ++j) y[j] += xi * row[j];
  }
}

void affine_backward_input(const double* K, size_t in, size_t out, const double* dy, double* dx) {
  for (size_t i = 0; i < in; ++i) {
    const double* row = K + i * out;
    double s = 0.0;
    for (size_t j = 0; j < out; ++j) s += row[j] * dy[j];
    dx[i] += s;
  }
}

void affine_backward_weights(double* dK, size_t in, size_t out, const double* x, const double* dy) {
  for (size_t i = 0; i < in; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    double* row = dK + i * out;
    for (size_t j = 0; j < out; ++j) row[j] += xi * dy[j];
  }
}

void adam(double* w, const double* g, double* m, double* v, size_t n, double lr, double beta1,
          double beta2, double eps, double c1, double c2) {
  for (size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = m[i] / c1;
    const double vhat = v[i] / c2;
    w[i] -= lr * mhat / std::sqrt(vhat + eps);
  }
}

double dot(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{affine_forward, affine_backward_input, affine_backward_weights,
                                 adam, dot, axpy};
  return table;
}

}  // namespace flagdec::kernels
