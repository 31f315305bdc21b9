#include <immintrin.h>

#include <cmath>

#include "flagdec/kernels.h"

namespace flagdec::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline void axpy_row(double a, const double* x, double* y, size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256d y0 = _mm256_loadu_pd(y + j);
    __m256d y1 = _mm256_loadu_pd(y + j + 4);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + j), y0);
    y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + j + 4), y1);
    _mm256_storeu_pd(y + j, y0);
    _mm256_storeu_pd(y + j + 4, y1);
  }
  for (; j + 4 <= n; j += 4)
    _mm256_storeu_pd(y + j, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + j), _mm256_loadu_pd(y + j)));
  for (; j < n; ++j) y[j] += a * x[j];
}

double dot(const double* a, const double* b, size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j + 4), _mm256_loadu_pd(b + j + 4), s1);
  }
  for (; j + 4 <= n; j += 4)
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; j < n; ++j) s += a[j] * b[j];
  return s;
}

void axpy(double a, const double* x, double* y, size_t n) { axpy_row(a, x, y, n); }

void affine_forward(const double* K, size_t in, size_t out, const double* x, double* y) {
  for (size_t i = 0; i < in; ++i) {
    if (x[i] == 0.0) continue;
    axpy_row(x[i], K + i * out, y, out);
  }
}

void affine_backward_input(const double* K, size_t in, size_t out, const double* dy, double* dx) {
  for (size_t i = 0; i < in; ++i) dx[i] += dot(K + i * out, dy, out);
}

void affine_backward_weights(double* dK, size_t in, size_t out, const double* x, const double* dy) {
  for (size_t i = 0; i < in; ++i) {
    if (x[i] == 0.0) continue;
    axpy_row(x[i], dy, dK + i * out, out);
  }
}

void adam(double* w, const double* g, double* m, double* v, size_t n, double lr, double beta1,
          double beta2, double eps, double c1, double c2) {
  const __m256d b1 = _mm256_set1_pd(beta1), nb1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d b2 = _mm256_set1_pd(beta2), nb2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d ic1 = _mm256_set1_pd(1.0 / c1), ic2 = _mm256_set1_pd(1.0 / c2);
  const __m256d ve = _mm256_set1_pd(eps), vlr = _mm256_set1_pd(lr);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d gi = _mm256_loadu_pd(g + i);
    __m256d mi = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)), _mm256_mul_pd(nb1, gi));
    __m256d vi = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                               _mm256_mul_pd(nb2, _mm256_mul_pd(gi, gi)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    __m256d mhat = _mm256_mul_pd(mi, ic1);
    __m256d vhat = _mm256_mul_pd(vi, ic2);
    __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, mhat), _mm256_sqrt_pd(_mm256_add_pd(vhat, ve)));
    _mm256_storeu_pd(w + i, _mm256_sub_pd(_mm256_loadu_pd(w + i), step));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    w[i] -= lr * (m[i] / c1) / std::sqrt(v[i] / c2 + eps);
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{affine_forward, affine_backward_input, affine_backward_weights,
                                 adam, dot, axpy};
  return &table;
}

}  // namespace flagdec::kernels
