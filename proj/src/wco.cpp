#include "wcospec/wco.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "wcospec/error.hpp"
#include "wcospec/kernels.hpp"
#include "wcospec/parallel.hpp"

namespace wcospec {

struct WCOperator::Cache {
  std::once_flag powers_once;
  std::vector<TaylorSeries> powers;
};

WCOperator::WCOperator(const WeightExpr& u, const Automorphism& psi, const SpaceSpec& space,
                       std::size_t order, const SamplingLadder& ladder)
    : u_(u),
      map_(psi.coeffs()),
      kind_(MapKind::Hyperbolic),
      psi_(psi),
      space_(space),
      order_(order),
      ladder_(ladder),
      cache_(std::make_shared<Cache>()) {
  symbol_ = analyze(u, psi, order, ladder);
  sup_ = symbol_->sup_norm_est;
  inf_ = symbol_->inf_modulus_est;
  u_series_ = symbol_->series;
  map_series_ = to_series(map_, order);
}

WCOperator::WCOperator(const WeightExpr& u, const MobiusCoeffs& map, const SpaceSpec& space,
                       std::size_t order, const SamplingLadder& ladder)
    : u_(u),
      map_(map.normalized()),
      kind_(classify(map)),
      space_(space),
      order_(order),
      ladder_(ladder),
      cache_(std::make_shared<Cache>()) {
  if (kind_ == MapKind::Hyperbolic) {
    *this = WCOperator(u, Automorphism::from_coeffs(map), space, order, ladder);
    return;
  }
  const ModulusBounds mb = modulus_bounds(u, ladder);
  if (!(mb.inf >= ladder.invertibility_threshold))
    throw Error(ErrorKind::NotInvertible, "weight is not bounded away from zero");
  sup_ = mb.sup;
  inf_ = mb.inf;
  u_series_ = u.to_series(order);
  check_conditioning(u_series_, "weight series");
  map_series_ = to_series(map_, order);
}

const Automorphism& WCOperator::automorphism() const {
  if (!psi_) throw Error(ErrorKind::NotHyperbolic, "operator symbol is " + std::string(to_string(kind_)));
  return *psi_;
}

const WeightSymbol& WCOperator::symbol() const {
  if (!symbol_) throw Error(ErrorKind::NotHyperbolic, "boundary moduli need a hyperbolic symbol");
  return *symbol_;
}

const std::vector<TaylorSeries>& WCOperator::map_powers() const {
  std::call_once(cache_->powers_once, [&] {
    auto& p = cache_->powers;
    p.reserve(order_ + 1);
    p.push_back(TaylorSeries::constant(1.0, order_));
    for (std::size_t m = 1; m <= order_; ++m) p.push_back(mul(p.back(), map_series_));
  });
  return cache_->powers;
}

TaylorSeries WCOperator::apply(const TaylorSeries& f) const {
  const auto& powers = map_powers();
  TaylorSeries composed(order_);
  const std::size_t deg = std::min(f.degree(), order_);
  for (std::size_t m = 0; m <= deg; ++m)
    if (f[m] != cd{}) kernels::axpy(f[m], powers[m].coeffs(), composed.coeffs());
  return mul(u_series_, composed);
}

TaylorSeries WCOperator::apply_exact(const WeightExpr& f) const {
  return (u_ * f.substitute(map_)).to_series(order_);
}

WeightExpr WCOperator::iterated_weight_expr(long n) const {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "iterated weight needs n >= 0");
  WeightExpr prod = WeightExpr::constant(1.0);
  for (long j = 0; j < n; ++j) prod = prod * u_.substitute(map_.power(j));
  return prod;
}

TaylorSeries WCOperator::iterated_weight(long n) const {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "iterated weight needs n >= 0");
  TaylorSeries prod = TaylorSeries::constant(1.0, order_);
  for (long j = 0; j < n; ++j) {
    prod = mul(prod, u_.substitute(map_.power(j)).to_series(order_));
    check_conditioning(prod, "iterated weight");
  }
  return prod;
}

double WCOperator::iterate_consistency(long n, const TaylorSeries& f) const {
  const TaylorSeries fN = f.resized(order_);
  const std::size_t band = order_ / 2 + 1;
  const double nf = norm(fN, space_);
  const double scale = nf > 0.0 ? nf : 1.0;
  // Truncating after each step leaks modes m > N down to about psi'(a)*m, so the
  // intermediate iterates are carried at a doubled working order until the
  // guard band stops moving.
  auto iterate_at = [&](std::size_t order) {
    const WCOperator work(u_, map_, space_, order, ladder_);
    TaylorSeries g = fN.resized(order);
    for (long k = 0; k < n; ++k) g = work.apply(g);
    return g.resized(band);
  };
  TaylorSeries lhs = fN;
  for (long k = 0; k < n; ++k) lhs = apply(lhs);
  lhs = lhs.resized(band);
  for (std::size_t order = 2 * order_; n > 1 && order <= 8 * order_; order *= 2) {
    TaylorSeries next = iterate_at(order);
    const double moved = norm(sub(next, lhs), space_) / scale;
    lhs = std::move(next);
    if (moved < 1e-12) break;
  }
  const TaylorSeries rhs = mul(iterated_weight(n), compose(fN, to_series(map_.power(n), order_))).resized(band);
  return norm(sub(lhs, rhs), space_) / scale;
}

WCOperator::WeightSequence WCOperator::gelfand_sup_weight(int n_max) const {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  const std::size_t per = static_cast<std::size_t>(ladder_.angles);
  const std::size_t total = per * static_cast<std::size_t>(ladder_.rungs);
  const std::size_t chunks = 64;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> hi(chunks, std::vector<double>(n_max, -inf));
  std::vector<std::vector<double>> lo(chunks, std::vector<double>(n_max, inf));
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * total / chunks, end = (c + 1) * total / chunks;
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int j = static_cast<int>(idx / per) + 1;
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(idx % per) + 0.5) / static_cast<double>(per);
      cd z = std::polar(1.0 - std::ldexp(1.0, -j), theta);
      double log_prod = 0.0;
      for (int n = 1; n <= n_max; ++n) {
        log_prod += std::log(std::abs(u_.evaluate(z)));
        z = map_(z);
        hi[c][n - 1] = std::max(hi[c][n - 1], log_prod);
        lo[c][n - 1] = std::min(lo[c][n - 1], log_prod);
      }
    }
  });
  WeightSequence seq;
  seq.sup.resize(n_max);
  seq.inf.resize(n_max);
  for (int n = 1; n <= n_max; ++n) {
    double h = -inf, l = inf;
    for (std::size_t c = 0; c < chunks; ++c) {
      h = std::max(h, hi[c][n - 1]);
      l = std::min(l, lo[c][n - 1]);
    }
    if (!std::isfinite(h) || !std::isfinite(l))
      throw Error(ErrorKind::IllConditioned, "iterated weight is not finite on the sampling circles");
    seq.sup[n - 1] = std::exp(h / n);
    seq.inf[n - 1] = std::exp(l / n);
  }
  return seq;
}

Eigen::MatrixXcd WCOperator::galerkin() const {
  const auto& powers = map_powers();
  const std::size_t n = order_ + 1;
  const std::vector<double> nrm = monomial_norms(space_, order_);
  Eigen::MatrixXcd G(n, n);
  parallel_for(n, [&](std::size_t m) {
    const TaylorSeries col = mul(u_series_, powers[m]);
    for (std::size_t k = 0; k < n; ++k) G(k, m) = col[k] * (nrm[k] / nrm[m]);
  });
  for (Eigen::Index i = 0; i < G.size(); ++i)
    if (!std::isfinite(std::abs(G.data()[i]))) throw Error(ErrorKind::IllConditioned, "Galerkin matrix overflow");
  return G;
}

WCOperator WCOperator::inverse() const {
  const WeightExpr inv_u = WeightExpr::constant(1.0) / u_.substitute(map_.inverse());
  if (!psi_) return WCOperator(inv_u, map_.inverse(), space_, order_, ladder_);
  WCOperator inv(inv_u, psi_->inverse(), space_, order_, ladder_);
  // |1/u o psi^-1| near a fixed point is 1/|u| there, so the limits follow
  // exactly from this symbol instead of a second round of sampling.
  const auto flip = [](const BoundaryLimit& l) {
    BoundaryLimit r = l;
    r.plus = 1.0 / l.minus;
    r.minus = 1.0 / l.plus;
    r.rung_max.clear();
    r.rung_min.clear();
    for (double v : l.rung_min) r.rung_max.push_back(1.0 / v);
    for (double v : l.rung_max) r.rung_min.push_back(1.0 / v);
    r.spread = r.plus - r.minus;
    return r;
  };
  WeightSymbol& sym = *inv.symbol_;
  sym.at_a = flip(symbol_->at_b);
  sym.at_b = flip(symbol_->at_a);
  sym.sup_norm_est = 1.0 / symbol_->inf_modulus_est;
  sym.inf_modulus_est = 1.0 / symbol_->sup_norm_est;
  sym.heuristic = symbol_->heuristic;
  return inv;
}

WCOperator WCOperator::scaled(cd c) const {
  const WeightExpr v = WeightExpr::constant(c) * u_;
  if (psi_) return WCOperator(v, *psi_, space_, order_, ladder_);
  return WCOperator(v, map_, space_, order_, ladder_);
}

WCOperator WCOperator::squared() const {
  const WeightExpr v = u_ * u_.substitute(map_);
  return WCOperator(v, map_.compose(map_), space_, order_, ladder_);
}

WeightExpr isometry_weight(const MobiusCoeffs& map, double gamma) {
  const MobiusCoeffs m = map.normalized();
  // psi' = (gamma_c z + delta_c)^-2 = delta_c^-2 (1 + q z)^-2 with det = 1
  const cd q = m.gamma / m.delta;
  const cd front = std::exp(-2.0 * gamma * std::log(m.delta));
  const WeightExpr z = WeightExpr::variable();
  return WeightExpr::constant(front) *
         WeightExpr::pow(WeightExpr::constant(1.0) + WeightExpr::constant(q) * z, -2.0 * gamma);
}

WCOperator normalized_isometry(const MobiusCoeffs& map, const SpaceSpec& space, std::size_t order) {
  return WCOperator(isometry_weight(map, space.gamma()), map, space, order);
}

WCOperator normalized_isometry(const Automorphism& psi, const SpaceSpec& space, std::size_t order) {
  return WCOperator(isometry_weight(psi.coeffs(), space.gamma()), psi, space, order);
}

}  // namespace wcospec
