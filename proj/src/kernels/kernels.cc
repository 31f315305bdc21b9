#include <atomic>
#include <cstdlib>
#include <cstring>

#include "flagdec/kernels.h"

namespace flagdec::kernels {

#ifndef FLAGDEC_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

namespace {

Isa detect() {
  const char* env = std::getenv("FLAGDEC_ISA");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  if (avx2_kernels() && cpu_supports(Isa::Avx2)) return Isa::Avx2;
  return Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const KernelTable& active() {
  return current().load(std::memory_order_relaxed) == Isa::Avx2 ? *avx2_kernels() : scalar_kernels();
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !(avx2_kernels() && cpu_supports(Isa::Avx2))) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

}  // namespace flagdec::kernels
