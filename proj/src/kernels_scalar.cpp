#include <algorithm>
#include <vector>

#include "wcospec/kernels.hpp"

namespace wcospec::kernels::scalar {

namespace {
// Plain real arithmetic keeps the reference free of the NaN/inf special
// casing that std::complex multiplication performs.
inline void mac(double& re, double& im, const cd& x, const cd& y) {
  re += x.real() * y.real() - x.imag() * y.imag();
  im += x.real() * y.imag() + x.imag() * y.real();
}
}  // namespace

void cauchy_product(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  const std::size_t n = out.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t jlo = k >= b.size() ? k - b.size() + 1 : 0;
    const std::size_t jhi = std::min(k + 1, a.size());
    double re = 0.0, im = 0.0;
    for (std::size_t j = jlo; j < jhi; ++j) mac(re, im, a[j], b[k - j]);
    out[k] = {re, im};
  }
}

void axpy(cd alpha, std::span<const cd> x, std::span<cd> y) {
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    double re = y[i].real(), im = y[i].imag();
    mac(re, im, alpha, x[i]);
    y[i] = {re, im};
  }
}

void pointwise_mul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  const std::size_t n = std::min({a.size(), b.size(), out.size()});
  for (std::size_t i = 0; i < n; ++i) {
    double re = 0.0, im = 0.0;
    mac(re, im, a[i], b[i]);
    out[i] = {re, im};
  }
}

double weighted_norm2(std::span<const cd> x, std::span<const double> w) {
  const std::size_t n = std::min(x.size(), w.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

cd weighted_inner(std::span<const cd> x, std::span<const cd> y, std::span<const double> w) {
  const std::size_t n = std::min({x.size(), y.size(), w.size()});
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = -y[i].imag();
    re += w[i] * (xr * yr - xi * yi);
    im += w[i] * (xr * yi + xi * yr);
  }
  return {re, im};
}

cd dot(std::span<const cd> x, std::span<const cd> y) {
  const std::size_t n = std::min(x.size(), y.size());
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) mac(re, im, x[i], y[i]);
  return {re, im};
}

}  // namespace wcospec::kernels::scalar
