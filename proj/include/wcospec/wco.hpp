#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "wcospec/expr.hpp"
#include "wcospec/mobius.hpp"
#include "wcospec/series.hpp"
#include "wcospec/spaces.hpp"
#include "wcospec/symbol.hpp"

namespace wcospec {

// The weighted composition operator f -> u (f∘psi) on a Hardy or Bergman
// space, represented on series truncated at order N. Immutable; copies share
// lazily built caches.
class WCOperator {
 public:
  // Hyperbolic symbol: the weight is fully analyzed (A±, B± available).
  WCOperator(const WeightExpr& u, const Automorphism& psi, const SpaceSpec& space, std::size_t order,
             const SamplingLadder& ladder = {});
  // Any disk automorphism; only the invertibility check is run.
  WCOperator(const WeightExpr& u, const MobiusCoeffs& map, const SpaceSpec& space, std::size_t order,
             const SamplingLadder& ladder = {});

  const WeightExpr& weight() const { return u_; }
  const MobiusCoeffs& map() const { return map_; }
  MapKind kind() const { return kind_; }
  bool is_hyperbolic() const { return psi_.has_value(); }
  // NotHyperbolic for other maps.
  const Automorphism& automorphism() const;
  const WeightSymbol& symbol() const;
  const SpaceSpec& space() const { return space_; }
  std::size_t order() const { return order_; }
  double sup_norm_est() const { return sup_; }
  double inf_modulus_est() const { return inf_; }
  const SamplingLadder& ladder() const { return ladder_; }

  const TaylorSeries& weight_series() const { return u_series_; }
  const TaylorSeries& map_series() const { return map_series_; }

  // u (f∘psi) truncated at N (finite section).
  TaylorSeries apply(const TaylorSeries& f) const;
  // Series of u (f∘psi) from the closed form of f: the composition is
  // done symbolically, so every returned coefficient is exact.
  TaylorSeries apply_exact(const WeightExpr& f) const;

  // u_n = prod_{j<n} u∘psi_j
  WeightExpr iterated_weight_expr(long n) const;
  TaylorSeries iterated_weight(long n) const;
  // Relative gap between apply^n(f) and u_n*(f o psi_n), read on indices <= N/2.
  double iterate_consistency(long n, const TaylorSeries& f) const;

  struct WeightSequence {
    std::vector<double> sup, inf;  // entries n = 1..n_max
  };
  // (max |u_n|)^{1/n} and (min |u_n|)^{1/n} over the sampling circles.
  WeightSequence gelfand_sup_weight(int n_max) const;

  // Matrix of the operator in the orthonormal monomial basis.
  Eigen::MatrixXcd galerkin() const;

  // (1/(u∘psi^{-1})) C_{psi^{-1}}
  WCOperator inverse() const;
  WCOperator scaled(cd c) const;
  // (u C_psi)^2 = u (u∘psi) C_{psi∘psi}
  WCOperator squared() const;

 private:
  struct Cache;
  const std::vector<TaylorSeries>& map_powers() const;

  WeightExpr u_;
  MobiusCoeffs map_;
  MapKind kind_;
  std::optional<Automorphism> psi_;
  std::optional<WeightSymbol> symbol_;
  SpaceSpec space_;
  std::size_t order_;
  SamplingLadder ladder_;
  double sup_ = 0.0, inf_ = 0.0;
  TaylorSeries u_series_, map_series_;
  std::shared_ptr<Cache> cache_;
};

// (psi')^gamma C_psi, an isometry of the space.
WCOperator normalized_isometry(const MobiusCoeffs& map, const SpaceSpec& space, std::size_t order);
WCOperator normalized_isometry(const Automorphism& psi, const SpaceSpec& space, std::size_t order);
// The weight (psi')^gamma as an expression.
WeightExpr isometry_weight(const MobiusCoeffs& map, double gamma);

}  // namespace wcospec
