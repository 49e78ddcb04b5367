#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "wcospec/series.hpp"

namespace testing {

using wcospec::cd;
using wcospec::TaylorSeries;

// Uniform in [-1, 1) from raw generator bits, so sequences do not depend on
// the standard library's distribution implementation.
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; }

inline cd unit_complex(std::mt19937_64& rng) { return {unit(rng), unit(rng)}; }

inline TaylorSeries random_poly(std::mt19937_64& rng, std::size_t degree, std::size_t order) {
  TaylorSeries p(order);
  for (std::size_t k = 0; k <= degree && k <= order; ++k) p[k] = unit_complex(rng);
  return p;
}

// A point with |z| <= radius.
inline cd random_point(std::mt19937_64& rng, double radius) {
  const double r = radius * std::sqrt(0.5 * (unit(rng) + 1.0));
  return std::polar(r, M_PI * unit(rng));
}

inline double max_coeff_diff(const TaylorSeries& f, const TaylorSeries& g) {
  double d = 0.0;
  const std::size_t n = std::max(f.order(), g.order());
  for (std::size_t k = 0; k <= n; ++k) d = std::max(d, std::abs(f[k] - g[k]));
  return d;
}

}  // namespace testing
