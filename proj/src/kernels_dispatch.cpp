#include <atomic>
#include <cstdlib>
#include <string>

#include "wcospec/error.hpp"
#include "wcospec/kernels.hpp"

namespace wcospec::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(WCOSPEC_HAVE_AVX2_KERNELS)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("WCOSPEC_SIMD")) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

void force_isa(Isa isa) {
  if (!isa_available(isa))
    throw Error(ErrorKind::InvalidArgument, "ISA not available: " + std::string(isa_name(isa)));
  current().store(isa, std::memory_order_relaxed);
}

#if defined(WCOSPEC_HAVE_AVX2_KERNELS)
#define WCOSPEC_DISPATCH(fn, ...) \
  (active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define WCOSPEC_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void cauchy_product(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  WCOSPEC_DISPATCH(cauchy_product, a, b, out);
}
void axpy(cd alpha, std::span<const cd> x, std::span<cd> y) { WCOSPEC_DISPATCH(axpy, alpha, x, y); }
void pointwise_mul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  WCOSPEC_DISPATCH(pointwise_mul, a, b, out);
}
double weighted_norm2(std::span<const cd> x, std::span<const double> w) {
  return WCOSPEC_DISPATCH(weighted_norm2, x, w);
}
cd weighted_inner(std::span<const cd> x, std::span<const cd> y, std::span<const double> w) {
  return WCOSPEC_DISPATCH(weighted_inner, x, y, w);
}
cd dot(std::span<const cd> x, std::span<const cd> y) { return WCOSPEC_DISPATCH(dot, x, y); }

}  // namespace wcospec::kernels
