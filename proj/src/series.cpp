#include "wcospec/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcospec/error.hpp"
#include "wcospec/kernels.hpp"

namespace wcospec {

TaylorSeries::TaylorSeries(std::vector<cd> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.resize(1);
}

TaylorSeries TaylorSeries::constant(cd value, std::size_t order) {
  TaylorSeries s(order);
  s.c_[0] = value;
  return s;
}

TaylorSeries TaylorSeries::identity(std::size_t order) {
  TaylorSeries s(std::max<std::size_t>(order, 1));
  s.c_[1] = 1.0;
  return s;
}

TaylorSeries TaylorSeries::monomial(std::size_t k, std::size_t order, cd coeff) {
  TaylorSeries s(std::max(order, k));
  s.c_[k] = coeff;
  return s;
}

cd TaylorSeries::evaluate(cd z) const {
  cd acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

TaylorSeries TaylorSeries::resized(std::size_t order) const {
  std::vector<cd> c(order + 1);
  std::copy_n(c_.begin(), std::min(c.size(), c_.size()), c.begin());
  return TaylorSeries(std::move(c));
}

double TaylorSeries::max_abs() const {
  double m = 0.0;
  for (const cd& v : c_) m = std::max(m, std::abs(v));
  return m;
}

std::size_t TaylorSeries::degree() const {
  for (std::size_t k = c_.size(); k-- > 0;)
    if (c_[k] != cd{}) return k;
  return 0;
}

TaylorSeries add(const TaylorSeries& f, const TaylorSeries& g) {
  TaylorSeries r = f.resized(std::max(f.order(), g.order()));
  for (std::size_t k = 0; k <= g.order(); ++k) r[k] += g[k];
  return r;
}

TaylorSeries sub(const TaylorSeries& f, const TaylorSeries& g) {
  TaylorSeries r = f.resized(std::max(f.order(), g.order()));
  for (std::size_t k = 0; k <= g.order(); ++k) r[k] -= g[k];
  return r;
}

TaylorSeries scale(const TaylorSeries& f, cd s) {
  TaylorSeries r = f;
  for (cd& v : r.coeffs()) v *= s;
  return r;
}

TaylorSeries mul(const TaylorSeries& f, const TaylorSeries& g) {
  TaylorSeries r(std::max(f.order(), g.order()));
  kernels::cauchy_product(f.coeffs(), g.coeffs(), r.coeffs());
  return r;
}

TaylorSeries compose(const TaylorSeries& f, const TaylorSeries& phi) {
  if (std::abs(phi[0]) >= 1.0)
    throw Error(ErrorKind::DivergentComposition,
                "composition requires |phi(0)| < 1, got " + std::to_string(std::abs(phi[0])));
  const std::size_t n = std::max(f.order(), phi.order());
  const TaylorSeries p = phi.resized(n);
  const std::size_t deg = f.degree();
  TaylorSeries acc = TaylorSeries::constant(f[deg], n);
  TaylorSeries tmp(n);
  for (std::size_t k = deg; k-- > 0;) {
    kernels::cauchy_product(acc.coeffs(), p.coeffs(), tmp.coeffs());
    tmp[0] += f[k];
    std::swap(acc, tmp);
  }
  // Growth relative to the input signals overflow in the composition.
  check_conditioning(acc, "compose", kIllConditionedThreshold * std::max(1.0, f.max_abs()));
  return acc;
}

TaylorSeries exp_series(const TaylorSeries& f) {
  const std::size_t n = f.order();
  TaylorSeries e(n);
  e[0] = std::exp(f[0]);
  // k e_k = sum_{j=1}^{k} j f_j e_{k-j}
  std::vector<cd> jf(n + 1);
  for (std::size_t j = 1; j <= n; ++j) jf[j] = static_cast<double>(j) * f[j];
  for (std::size_t k = 1; k <= n; ++k) {
    cd s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += jf[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return e;
}

TaylorSeries log_series(const TaylorSeries& f) {
  if (f[0] == cd{}) throw Error(ErrorKind::LogAtZero, "log of a series vanishing at 0");
  const std::size_t n = f.order();
  TaylorSeries l(n);
  l[0] = std::log(f[0]);
  const cd inv0 = 1.0 / f[0];
  // f' = f l'  =>  k f_k = sum_{j=1}^{k} j l_j f_{k-j}
  for (std::size_t k = 1; k <= n; ++k) {
    cd s = static_cast<double>(k) * f[k];
    for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * l[j] * f[k - j];
    l[k] = s * inv0 / static_cast<double>(k);
  }
  return l;
}

TaylorSeries reciprocal(const TaylorSeries& f) {
  if (f[0] == cd{}) throw Error(ErrorKind::NotInvertible, "reciprocal of a series vanishing at 0");
  const std::size_t n = f.order();
  TaylorSeries r(n);
  const cd inv0 = 1.0 / f[0];
  r[0] = inv0;
  for (std::size_t k = 1; k <= n; ++k) {
    cd s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += f[j] * r[k - j];
    r[k] = -s * inv0;
  }
  return r;
}

TaylorSeries divide(const TaylorSeries& f, const TaylorSeries& g) {
  const std::size_t n = std::max(f.order(), g.order());
  return mul(f.resized(n), reciprocal(g.resized(n)));
}

TaylorSeries power(const TaylorSeries& f, cd s) {
  if (f[0] == cd{}) throw Error(ErrorKind::LogAtZero, "power of a series vanishing at 0");
  const std::size_t n = f.order();
  TaylorSeries g(n);
  g[0] = std::exp(s * std::log(f[0]));
  const cd inv0 = 1.0 / f[0];
  // f g' = s f' g  =>  k f_0 g_k = sum_{j=1}^{k} (s j - (k - j)) f_j g_{k-j}
  for (std::size_t k = 1; k <= n; ++k) {
    cd acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      acc += (s * static_cast<double>(j) - static_cast<double>(k - j)) * f[j] * g[k - j];
    g[k] = acc * inv0 / static_cast<double>(k);
  }
  return g;
}

TaylorSeries integer_power(const TaylorSeries& f, long n) {
  if (n < 0) return reciprocal(integer_power(f, -n));
  TaylorSeries result = TaylorSeries::constant(1.0, f.order());
  TaylorSeries base = f;
  unsigned long e = static_cast<unsigned long>(n);
  while (e) {
    if (e & 1UL) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

TaylorSeries fractional_power(cd c, cd s, std::size_t order) {
  if (c == cd{}) throw Error(ErrorKind::LogAtZero, "fractional power at c = 0");
  TaylorSeries r(order);
  // binom(s, k) (-1/c)^k by recurrence
  cd t = std::exp(s * std::log(c));
  const cd inv_c = 1.0 / c;
  r[0] = t;
  for (std::size_t k = 1; k <= order; ++k) {
    t *= (static_cast<double>(k - 1) - s) / static_cast<double>(k) * inv_c;
    r[k] = t;
  }
  return r;
}

TaylorSeries derivative(const TaylorSeries& f) {
  const std::size_t n = f.order();
  if (n == 0) return TaylorSeries(0);
  TaylorSeries d(n - 1);
  for (std::size_t k = 1; k <= n; ++k) d[k - 1] = static_cast<double>(k) * f[k];
  return d;
}

void check_conditioning(const TaylorSeries& f, std::string_view context, double threshold) {
  for (std::size_t k = 0; k <= f.order(); ++k) {
    const double m = std::abs(f[k]);
    if (!std::isfinite(m) || m > threshold)
      throw Error(ErrorKind::IllConditioned,
                  std::string(context) + ": coefficient " + std::to_string(k) + " has magnitude " +
                      std::to_string(m));
  }
}

}  // namespace wcospec
