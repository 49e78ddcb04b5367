#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

#include "wcospec/series.hpp"

namespace wcospec {

// (alpha z + beta) / (gamma z + delta), stored projectively with det = 1.
struct MobiusCoeffs {
  cd alpha{1.0}, beta{0.0}, gamma{0.0}, delta{1.0};

  static MobiusCoeffs identity() { return {}; }

  cd operator()(cd z) const { return (alpha * z + beta) / (gamma * z + delta); }
  cd det() const { return alpha * delta - beta * gamma; }
  cd derivative(cd z) const {
    const cd d = gamma * z + delta;
    return det() / (d * d);
  }
  MobiusCoeffs normalized() const;
  MobiusCoeffs inverse() const;
  // this ∘ other
  MobiusCoeffs compose(const MobiusCoeffs& other) const;
  MobiusCoeffs power(long n) const;
  // Equality as maps (coefficients up to a common scalar).
  bool projectively_equal(const MobiusCoeffs& other, double tol) const;
};

enum class MapKind { Hyperbolic, Parabolic, Elliptic, Identity };

std::string_view to_string(MapKind kind);

// Tolerance on trace^2 - 4 separating parabolic maps.
inline constexpr double kParabolicTolerance = 1e-10;

// Throws NotAutomorphism if the map does not preserve the unit disk.
MapKind classify(const MobiusCoeffs& m);

// Geometric series of the Möbius map around 0.
TaylorSeries to_series(const MobiusCoeffs& m, std::size_t order);

// Hyperbolic automorphism with attractive boundary fixed point a
// (psi'(a) = lambda_a < 1) and repulsive fixed point b.
class Automorphism {
 public:
  static Automorphism from_fixed_points(cd a, cd b, double lambda_a);
  // z -> (r + z) / (1 + r z), 0 < r < 1.
  static Automorphism canonical(double r);
  // Throws NotAutomorphism or NotHyperbolic.
  static Automorphism from_coeffs(const MobiusCoeffs& m);

  cd a() const { return a_; }
  cd b() const { return b_; }
  double lambda_a() const { return lambda_a_; }
  double lambda_b() const { return 1.0 / lambda_a_; }
  // -log psi'(a)
  double shift() const { return -std::log(lambda_a_); }
  double canonical_r() const { return (1.0 - lambda_a_) / (1.0 + lambda_a_); }
  const MobiusCoeffs& coeffs() const { return m_; }

  cd operator()(cd z) const { return m_(z); }
  cd derivative(cd z) const { return m_.derivative(z); }
  // psi_n: same fixed points, multiplier lambda_a^n (psi^-1 for n < 0).
  MobiusCoeffs iterate(long n) const;
  Automorphism inverse() const;
  TaylorSeries to_series(std::size_t order) const { return wcospec::to_series(m_, order); }

 private:
  Automorphism(cd a, cd b, double lambda_a, const MobiusCoeffs& m)
      : a_(a), b_(b), lambda_a_(lambda_a), m_(m) {}

  cd a_, b_;
  double lambda_a_;
  MobiusCoeffs m_;
};

// Roots of gamma z^2 + (delta - alpha) z - beta = 0, cancellation-free.
// For gamma = 0 the second root is reported as infinity.
struct FixedPoints {
  cd first, second;
};
FixedPoints fixed_points(const MobiusCoeffs& m);

}  // namespace wcospec
