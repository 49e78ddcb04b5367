#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference and, on
// x86-64 hosts with AVX2+FMA, a vector variant chosen once at startup.
namespace wcospec::kernels {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

Isa active_isa();
std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
// Overrides the runtime choice; throws if the ISA is not available.
void force_isa(Isa isa);

// out[k] = sum_{j<=k} a[j] * b[k-j] for k < out.size(); entries of a or b
// beyond their length count as zero. out must not alias a or b.
void cauchy_product(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);

// y += alpha * x
void axpy(cd alpha, std::span<const cd> x, std::span<cd> y);

// out[i] = a[i] * b[i]; out may alias a or b.
void pointwise_mul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);

// sum_i w[i] |x[i]|^2
double weighted_norm2(std::span<const cd> x, std::span<const double> w);

// sum_i w[i] x[i] conj(y[i])
cd weighted_inner(std::span<const cd> x, std::span<const cd> y, std::span<const double> w);

// sum_i x[i] y[i]  (no conjugation)
cd dot(std::span<const cd> x, std::span<const cd> y);

namespace scalar {
void cauchy_product(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
void axpy(cd alpha, std::span<const cd> x, std::span<cd> y);
void pointwise_mul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
double weighted_norm2(std::span<const cd> x, std::span<const double> w);
cd weighted_inner(std::span<const cd> x, std::span<const cd> y, std::span<const double> w);
cd dot(std::span<const cd> x, std::span<const cd> y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define WCOSPEC_HAVE_AVX2_KERNELS 1
namespace avx2 {
void cauchy_product(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
void axpy(cd alpha, std::span<const cd> x, std::span<cd> y);
void pointwise_mul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
double weighted_norm2(std::span<const cd> x, std::span<const double> w);
cd weighted_inner(std::span<const cd> x, std::span<const cd> y, std::span<const double> w);
cd dot(std::span<const cd> x, std::span<const cd> y);
}  // namespace avx2
#endif

}  // namespace wcospec::kernels
