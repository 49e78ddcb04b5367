#include "wcospec/mobius.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wcospec/error.hpp"

namespace wcospec {

MobiusCoeffs MobiusCoeffs::normalized() const {
  const cd s = std::sqrt(det());
  if (s == cd{}) throw Error(ErrorKind::NotAutomorphism, "degenerate Möbius map (det = 0)");
  return {alpha / s, beta / s, gamma / s, delta / s};
}

MobiusCoeffs MobiusCoeffs::inverse() const {
  return MobiusCoeffs{delta, -beta, -gamma, alpha}.normalized();
}

MobiusCoeffs MobiusCoeffs::compose(const MobiusCoeffs& o) const {
  return MobiusCoeffs{alpha * o.alpha + beta * o.gamma, alpha * o.beta + beta * o.delta,
                      gamma * o.alpha + delta * o.gamma, gamma * o.beta + delta * o.delta}
      .normalized();
}

MobiusCoeffs MobiusCoeffs::power(long n) const {
  MobiusCoeffs base = n < 0 ? inverse() : normalized();
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  MobiusCoeffs result = identity();
  while (e) {
    if (e & 1UL) result = result.compose(base);
    e >>= 1;
    if (e) base = base.compose(base);
  }
  return result;
}

bool MobiusCoeffs::projectively_equal(const MobiusCoeffs& o, double tol) const {
  const MobiusCoeffs p = normalized(), q = o.normalized();
  auto close = [&](double sign) {
    return std::abs(p.alpha - sign * q.alpha) <= tol && std::abs(p.beta - sign * q.beta) <= tol &&
           std::abs(p.gamma - sign * q.gamma) <= tol && std::abs(p.delta - sign * q.delta) <= tol;
  };
  return close(1.0) || close(-1.0);
}

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Hyperbolic: return "hyperbolic";
    case MapKind::Parabolic: return "parabolic";
    case MapKind::Elliptic: return "elliptic";
    case MapKind::Identity: return "identity";
  }
  return "unknown";
}

MapKind classify(const MobiusCoeffs& m0) {
  const MobiusCoeffs m = m0.normalized();
  // Pole must lie outside the closed disk and the circle must map to itself.
  if (std::abs(m.delta) <= std::abs(m.gamma))
    throw Error(ErrorKind::NotAutomorphism, "pole inside the closed disk");
  if (std::abs(m(0.0)) >= 1.0) throw Error(ErrorKind::NotAutomorphism, "0 is not mapped into the disk");
  for (int k = 0; k < 8; ++k) {
    const cd zeta = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.25) / 8.0);
    if (std::abs(std::abs(m(zeta)) - 1.0) > 1e-9)
      throw Error(ErrorKind::NotAutomorphism, "unit circle is not preserved");
  }
  const double scale = std::abs(m.alpha) + std::abs(m.delta);
  if (std::abs(m.beta) <= 1e-14 * scale && std::abs(m.gamma) <= 1e-14 * scale &&
      (std::abs(m.alpha - m.delta) <= 1e-14 * scale || std::abs(m.alpha + m.delta) <= 1e-14 * scale))
    return MapKind::Identity;
  const cd tr = m.alpha + m.delta;
  const double t2 = std::real(tr * tr);
  if (t2 > 4.0 + kParabolicTolerance) return MapKind::Hyperbolic;
  if (t2 < 4.0 - kParabolicTolerance) return MapKind::Elliptic;
  return MapKind::Parabolic;
}

TaylorSeries to_series(const MobiusCoeffs& m0, std::size_t order) {
  const MobiusCoeffs m = m0.normalized();
  // (alpha z + beta)/delta * sum (-q z)^k with q = gamma/delta
  const cd q = m.gamma / m.delta;
  TaylorSeries geo(order);
  cd t = 1.0 / m.delta;
  for (std::size_t k = 0; k <= order; ++k) {
    geo[k] = t;
    t *= -q;
  }
  TaylorSeries r(order);
  for (std::size_t k = 0; k <= order; ++k) {
    r[k] = m.beta * geo[k];
    if (k > 0) r[k] += m.alpha * geo[k - 1];
  }
  return r;
}

FixedPoints fixed_points(const MobiusCoeffs& m) {
  const cd A = m.gamma, B = m.delta - m.alpha, C = -m.beta;
  const double inf = std::numeric_limits<double>::infinity();
  if (A == cd{}) return {B == cd{} ? cd{inf, 0} : -C / B, cd{inf, 0}};
  const cd disc = std::sqrt(B * B - 4.0 * A * C);
  // Choose the sign that avoids cancellation in B ± disc.
  const cd q = std::abs(B + disc) >= std::abs(B - disc) ? -0.5 * (B + disc) : -0.5 * (B - disc);
  if (q == cd{}) return {cd{}, cd{}};
  return {q / A, C / q};
}

Automorphism Automorphism::from_fixed_points(cd a, cd b, double lambda) {
  if (std::abs(std::abs(a) - 1.0) > 1e-10 || std::abs(std::abs(b) - 1.0) > 1e-10)
    throw Error(ErrorKind::InvalidFixedPoints, "fixed points must lie on the unit circle");
  if (std::abs(a - b) <= 1e-10) throw Error(ErrorKind::InvalidFixedPoints, "fixed points coincide");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw Error(ErrorKind::InvalidMultiplier, "multiplier at the attractive point must lie in (0, 1)");
  a /= std::abs(a);
  b /= std::abs(b);
  const MobiusCoeffs m = MobiusCoeffs{b * lambda - a, a * b * (1.0 - lambda), cd(lambda - 1.0),
                                      b - a * lambda}
                             .normalized();
  return Automorphism(a, b, lambda, m);
}

Automorphism Automorphism::canonical(double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::InvalidMultiplier, "canonical r must lie in (0, 1)");
  return from_fixed_points(1.0, -1.0, (1.0 - r) / (1.0 + r));
}

Automorphism Automorphism::from_coeffs(const MobiusCoeffs& m0) {
  const MobiusCoeffs m = m0.normalized();
  const MapKind kind = classify(m);
  if (kind != MapKind::Hyperbolic)
    throw Error(ErrorKind::NotHyperbolic, "map is " + std::string(to_string(kind)));
  const FixedPoints fp = fixed_points(m);
  const double d1 = std::abs(m.derivative(fp.first));
  const double d2 = std::abs(m.derivative(fp.second));
  cd a = d1 < d2 ? fp.first : fp.second;
  cd b = d1 < d2 ? fp.second : fp.first;
  a /= std::abs(a);
  b /= std::abs(b);
  return Automorphism(a, b, std::min(d1, d2), m);
}

MobiusCoeffs Automorphism::iterate(long n) const {
  if (n == 0) return MobiusCoeffs::identity();
  const double l = std::pow(lambda_a_, static_cast<double>(n < 0 ? -n : n));
  if (!(l > 1e-300)) return m_.power(n);
  return n > 0 ? from_fixed_points(a_, b_, l).coeffs() : from_fixed_points(b_, a_, l).coeffs();
}

Automorphism Automorphism::inverse() const {
  return Automorphism(b_, a_, lambda_a_, m_.inverse());
}

}  // namespace wcospec
