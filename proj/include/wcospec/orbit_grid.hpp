#pragma once

#include <cstddef>
#include <vector>

#include "wcospec/expr.hpp"
#include "wcospec/mobius.hpp"
#include "wcospec/series.hpp"
#include "wcospec/spaces.hpp"

namespace wcospec {

// Strip coordinates for a hyperbolic automorphism. With
//   W = log((b - z)/(a - z)),   z(W) = (b - a e^W)/(1 - e^W),
// the disk becomes the strip y_lo < Im W < y_lo + pi and psi acts as
// W -> W + delta. On a grid with step delta/m in Re W, psi moves samples by
// exactly m columns, so iterates of a weighted composition operator are
// computed without truncation. The branch of W is the one containing
// Log(b/a) = W(0).
struct OrbitGridOptions {
  int steps_per_shift = 16;   // m
  int bergman_lines = 48;     // Gauss-Jacobi nodes across the strip
  double core_left = 60.0;    // quadrature window is [-core_left, core_right]
  double core_right = 60.0;
  int extra_shifts_left = 0;  // padding for backward iterates
  int extra_shifts_right = 0; // padding for forward iterates
};

// (a - z)^exp_a (b - z)^exp_b poly(z). Sampled on a grid through the stable
// boundary logarithms, so values near a and b keep full relative precision.
struct FactoredFunction {
  cd exp_a{}, exp_b{};
  TaylorSeries poly = TaylorSeries::constant(1.0, 0);

  WeightExpr to_expr(const Automorphism& psi) const;
  TaylorSeries to_series(const Automorphism& psi, std::size_t order) const;
};

// Samples on the grid; columns in [lo, hi) hold valid data.
struct GridFunction {
  std::vector<cd> values;
  std::size_t lo = 0, hi = 0;
};

class OrbitGrid {
 public:
  OrbitGrid(const Automorphism& psi, const SpaceSpec& space, const OrbitGridOptions& options = {});

  const Automorphism& automorphism() const { return psi_; }
  const SpaceSpec& space() const { return space_; }
  std::size_t lines() const { return y_.size(); }
  std::size_t columns() const { return x_.size(); }
  std::size_t size() const { return lines() * columns(); }
  std::size_t shift() const { return m_; }
  std::size_t core_lo() const { return core_lo_; }
  std::size_t core_hi() const { return core_hi_; }
  double x(std::size_t col) const { return x_[col]; }
  double y(std::size_t line) const { return y_[line]; }
  double strip_bottom() const { return y_lo_; }
  std::size_t index(std::size_t line, std::size_t col) const { return line * columns() + col; }

  cd z(std::size_t i) const { return z_[i]; }
  cd strip_coordinate(std::size_t i) const { return {x_[i % columns()], y_[i / columns()]}; }
  cd log_a_minus_z(std::size_t i) const { return log_a_[i]; }
  cd log_b_minus_z(std::size_t i) const { return log_b_[i]; }
  // log of the quadrature weight (core columns only; -inf elsewhere).
  double log_weight(std::size_t i) const { return log_w_[i]; }
  const std::vector<double>& weights() const { return w_; }

  GridFunction sample(const WeightExpr& f) const;
  GridFunction sample(const TaylorSeries& poly) const;
  GridFunction sample(const FactoredFunction& f) const;
  // (a - z)^ea (b - z)^eb with the series branch convention.
  GridFunction boundary_power(cd ea, cd eb) const;
  // ((b - z)/(a - z))^w = exp(w W)
  GridFunction strip_exp(cd w) const;
  GridFunction constant(cd c) const;

  // Pointwise algebra; the valid range is the intersection.
  GridFunction multiply(const GridFunction& f, const GridFunction& g) const;
  GridFunction add(const GridFunction& f, const GridFunction& g) const;
  GridFunction scale(const GridFunction& f, cd s) const;
  GridFunction axpy(cd s, const GridFunction& x, const GridFunction& y) const;  // y + s x

  // (u C_psi f)(col) = u(col) f(col + m)
  GridFunction forward(const GridFunction& u, const GridFunction& f) const;
  // (u C_psi)^{-1} f (col) = f(col - m) / u(col - m)
  GridFunction backward(const GridFunction& u, const GridFunction& f) const;

  // Space norm by quadrature over the core window (the core must be valid).
  double norm(const GridFunction& f) const;
  cd inner(const GridFunction& f, const GridFunction& g) const;
  bool covers_core(const GridFunction& f) const { return f.lo <= core_lo_ && f.hi >= core_hi_; }

 private:
  GridFunction blank(std::size_t lo, std::size_t hi) const;
  void require_core(const GridFunction& f) const;

  Automorphism psi_;
  SpaceSpec space_;
  std::size_t m_;
  std::size_t core_lo_, core_hi_;
  double y_lo_;
  std::vector<double> x_, y_;
  std::vector<cd> z_, log_a_, log_b_;
  std::vector<double> log_w_, w_;
};

}  // namespace wcospec
