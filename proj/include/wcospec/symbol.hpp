#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "wcospec/expr.hpp"
#include "wcospec/mobius.hpp"
#include "wcospec/series.hpp"

namespace wcospec {

// Sampling ladder for sup/inf and boundary limits.
struct SamplingLadder {
  int rungs = 20;          // circles rho_j = 1 - 2^-j, j = 1..rungs
  int angles = 4096;       // samples per circle
  int fan_angles = 64;     // angles in (-pi/2, pi/2) near a and b
  int limit_rungs = 5;     // last rungs used for limsup/liminf
  double invertibility_threshold = 1e-8;
};

struct BoundaryLimit {
  double plus = 0.0;   // limsup estimate
  double minus = 0.0;  // liminf estimate
  // Per-rung max/min of |u| on the fan; rung j at distance 2^-j.
  std::vector<double> rung_max, rung_min;
  // Spread of the last rungs (max of rung_max - min of rung_min).
  double spread = 0.0;
  bool monotone = true;
};

struct WeightSymbol {
  WeightExpr expr;
  TaylorSeries series;
  double sup_norm_est = 0.0;
  double inf_modulus_est = 0.0;
  BoundaryLimit at_a, at_b;
  // Set when |u| may not extend continuously to a or b.
  bool heuristic = false;
  SamplingLadder ladder;

  double A_plus() const { return at_a.plus; }
  double A_minus() const { return at_a.minus; }
  double B_plus() const { return at_b.plus; }
  double B_minus() const { return at_b.minus; }
};

// sup/inf of |u| over the ladder circles plus the origin; zero detection by
// winding numbers. Throws NotInvertible when the infimum is below threshold.
struct ModulusBounds {
  double sup = 0.0, inf = 0.0;
  int zeros_inside = 0;
};
ModulusBounds modulus_bounds(const WeightExpr& u, const SamplingLadder& ladder = {});

BoundaryLimit boundary_limit(const WeightExpr& u, cd c, const SamplingLadder& ladder = {});

WeightSymbol analyze(const WeightExpr& u, const Automorphism& psi, std::size_t order,
                     const SamplingLadder& ladder = {});

// Winding number of u on |z| = rho; ZeroOnCircle if |u| < 1e-12 at a sample.
int winding_check(const WeightExpr& u, double rho);

// "canonical:r" or "fixed:a,b;deriv:lambda_a" (a, b complex constant expressions).
Automorphism parse_automorphism(std::string_view spec);

}  // namespace wcospec
