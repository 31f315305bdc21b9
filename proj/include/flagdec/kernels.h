#pragma once

#include <cstddef>

namespace flagdec::kernels {

enum class Isa { Scalar, Avx2 };

// Dense kernels in "input-major" layout: K is in x out, row-major.
struct KernelTable {
  // y[0:out] += sum_i x[i] * K[i, :]
  void (*affine_forward)(const double* K, size_t in, size_t out, const double* x, double* y);
  // dx[i] += dot(K[i, :], dy)
  void (*affine_backward_input)(const double* K, size_t in, size_t out, const double* dy,
                                double* dx);
  // dK[i, :] += x[i] * dy
  void (*affine_backward_weights)(double* dK, size_t in, size_t out, const double* x,
                                  const double* dy);
  // Adam with bias-corrected moments; eps inside the square root.
  void (*adam)(double* w, const double* g, double* m, double* v, size_t n, double lr, double beta1,
               double beta2, double eps, double correction1, double correction2);
  double (*dot)(const double* a, const double* b, size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_supports(Isa isa);
// Active table: AVX2 when compiled and supported, unless FLAGDEC_ISA=scalar or overridden.
const KernelTable& active();
Isa active_isa();
// Returns false if the requested variant is unavailable on this build or CPU.
bool set_isa(Isa isa);
const char* isa_name(Isa isa);

}  // namespace flagdec::kernels
