#include "wcospec/universality.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "wcospec/error.hpp"
#include "wcospec/parallel.hpp"

namespace wcospec {

namespace {

constexpr double kPi = std::numbers::pi;

double band_norm(const TaylorSeries& f, std::size_t band) {
  double s = 0.0;
  for (std::size_t k = 0; k <= band && k <= f.order(); ++k) s += std::norm(f[k]);
  return std::sqrt(s);
}

double relative_band_residual(const TaylorSeries& got, const TaylorSeries& want, std::size_t band) {
  const double d = band_norm(sub(got.resized(want.order()), want), band);
  const double n = band_norm(want, band);
  return n > 0.0 ? d / n : d;
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; }

// Singular values of a Hermitian positive semidefinite matrix, descending.
std::vector<double> gram_singular_values(const Eigen::MatrixXcd& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::EigSolverFailure, "Gram eigensolver failed");
  std::vector<double> s(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double& x : s) x = std::abs(x);
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::vector<cd> control_coefficients(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<cd> c(n);
  double s = 0.0;
  for (auto& x : c) {
    x = cd(uniform(rng), uniform(rng));
    s += std::norm(x);
  }
  for (auto& x : c) x /= std::sqrt(s);
  return c;
}

void fill_rank(KernelProbe& kp, const Eigen::MatrixXcd& gram, std::uint64_t seed) {
  const Eigen::Index n = gram.rows();
  kp.singular_values = gram_singular_values(gram);
  const double top = kp.singular_values.front();
  kp.gram_rank = static_cast<int>(std::count_if(kp.singular_values.begin(), kp.singular_values.end(),
                                                [&](double s) { return s > kRankThreshold * top; }));
  kp.min_singular_value = kp.singular_values.back() / top;
  // Append v = sum c_k f_k: <v, f_j> and <v, v> follow from the Gram.
  const std::vector<cd> c = control_coefficients(static_cast<std::size_t>(n), seed);
  Eigen::VectorXcd cv(n);
  for (Eigen::Index i = 0; i < n; ++i) cv(i) = c[static_cast<std::size_t>(i)];
  Eigen::MatrixXcd aug(n + 1, n + 1);
  aug.topLeftCorner(n, n) = gram;
  // gram(i, j) = <f_i, f_j>; <f_i, v> = sum_j conj(c_j) gram(i, j)
  const Eigen::VectorXcd col = gram * cv.conjugate();
  aug.block(0, n, n, 1) = col;
  aug.block(n, 0, 1, n) = col.adjoint();
  aug(n, n) = (cv.transpose() * gram * cv.conjugate())(0, 0);
  kp.augmented_singular_values = gram_singular_values(aug);
  const double last = kp.augmented_singular_values.back();
  kp.control_gap = last > 0.0 ? kp.augmented_singular_values[static_cast<std::size_t>(n) - 1] / last
                              : std::numeric_limits<double>::infinity();
}

struct GalerkinSolver {
  Eigen::MatrixXcd A;  // lambda I - M in the orthonormal basis
  std::vector<double> nrm;
  Eigen::MatrixXcd normal;
  Eigen::LDLT<Eigen::MatrixXcd> ldlt;

  GalerkinSolver(const WCOperator& T, cd lambda) : nrm(monomial_norms(T.space(), T.order())) {
    const Eigen::MatrixXcd M = T.galerkin();
    A = -M;
    A.diagonal().array() += lambda;
    normal = A.adjoint() * A;
    const double eps = 1e-14 * normal.diagonal().real().maxCoeff();
    normal.diagonal().array() += eps;
    ldlt.compute(normal);
  }
  double solve_residual(const TaylorSeries& y) const {
    Eigen::VectorXcd b(A.rows());
    for (Eigen::Index k = 0; k < b.size(); ++k) b(k) = y[static_cast<std::size_t>(k)] * nrm[static_cast<std::size_t>(k)];
    const Eigen::VectorXcd x = ldlt.solve(A.adjoint() * b);
    return (A * x - b).norm() / b.norm();
  }
};

int neumann_terms(double rate, double target) {
  if (!(rate < 1.0)) return 400;
  return std::clamp(static_cast<int>(std::ceil(std::log(target) / std::log(rate))) + 10, 20, 400);
}

}  // namespace

OmegaWeight omega_weight(const Automorphism& psi, double mu, double nu, std::size_t order) {
  if (mu < 0.0 || nu < 0.0) throw Error(ErrorKind::InvalidArgument, "omega exponents must be >= 0");
  OmegaWeight w;
  w.mu = mu;
  w.nu = nu;
  w.a = psi.a();
  w.b = psi.b();
  FactoredFunction f;
  f.exp_a = mu;
  f.exp_b = nu;
  w.expr = f.to_expr(psi);
  w.series = f.to_series(psi, order);
  return w;
}

WeightExpr strip_log_expr(const Automorphism& psi) {
  const WeightExpr z = WeightExpr::variable();
  const WeightExpr one = WeightExpr::constant(1.0);
  return WeightExpr::constant(std::log(psi.b() / psi.a())) +
         WeightExpr::log(one - WeightExpr::constant(1.0 / psi.b()) * z) -
         WeightExpr::log(one - WeightExpr::constant(1.0 / psi.a()) * z);
}

WeightExpr eigenfunction_expr(const Automorphism& psi, cd w) {
  return WeightExpr::exp(WeightExpr::constant(w) * strip_log_expr(psi));
}

TaylorSeries eigenfunction(const Automorphism& psi, cd w, std::size_t order) {
  if (std::abs(psi.a() - psi.b()) < 1e-12) throw Error(ErrorKind::BranchUndefined, "fixed points coincide");
  return eigenfunction_expr(psi, w).to_series(order);
}

cd gk_exponent(const Automorphism& psi, long k) {
  return cd(0.0, 2.0 * kPi * static_cast<double>(k) / psi.shift());
}

std::vector<TaylorSeries> gk_family(const Automorphism& psi, long K, std::size_t order) {
  if (K < 0) throw Error(ErrorKind::InvalidArgument, "K must be >= 0");
  std::vector<TaylorSeries> out(static_cast<std::size_t>(2 * K + 1));
  parallel_for(out.size(), [&](std::size_t i) {
    out[i] = eigenfunction(psi, gk_exponent(psi, static_cast<long>(i) - K), order);
  });
  return out;
}

EigenRelation gk_eigen_relation(const Automorphism& psi, long k, std::size_t order) {
  EigenRelation r;
  const cd w = gk_exponent(psi, k);
  const WeightExpr g = eigenfunction_expr(psi, w);
  const TaylorSeries gs = g.to_series(order);
  r.band = order / 2;
  r.exact = relative_band_residual(g.substitute(psi.coeffs()).to_series(order), gs, r.band);
  // The finite section only keeps indices below about psi'(a) N.
  r.finite_section_band = static_cast<std::size_t>(0.75 * psi.lambda_a() * static_cast<double>(order));
  TaylorSeries composed = compose(gs, psi.to_series(order));
  r.finite_section = relative_band_residual(composed, gs, r.finite_section_band);
  return r;
}

cd generator_eigenvalue(const Automorphism& psi, long k) {
  return 2.0 * kPi * static_cast<double>(k) * (psi.b() - psi.a()) * cd(0.0, 1.0) / psi.shift();
}

double generator_check(const Automorphism& psi, long k, std::size_t order) {
  const TaylorSeries g = eigenfunction(psi, gk_exponent(psi, k), order);
  TaylorSeries omega(2);
  omega[0] = psi.a() * psi.b();
  omega[1] = -(psi.a() + psi.b());
  omega[2] = 1.0;
  const TaylorSeries lhs = mul(omega.resized(order), derivative(g).resized(order));
  return relative_band_residual(lhs, scale(g, generator_eigenvalue(psi, k)), order / 2);
}

KernelProbe kernel_probe(const WCOperator& T, cd lambda, long K) {
  if (K < 0) throw Error(ErrorKind::InvalidArgument, "K must be >= 0");
  const Automorphism& psi = T.automorphism();
  const AnnulusPrediction ann = predict_annuli(T);
  if (!ann.in_window(lambda)) {
    std::ostringstream os;
    os << "|lambda| = " << std::abs(lambda) << " is outside the window (" << ann.inclusion_inner << ", "
       << ann.inclusion_outer << ")";
    throw Error(ErrorKind::NoEigenvectorFound, os.str());
  }
  const double gamma = T.space().gamma(), delta = psi.shift();
  const WeightSymbol& sym = T.symbol();
  const cd ua = T.weight().evaluate(psi.a());
  const cd ub = T.weight().evaluate(psi.b());
  const bool continuous_ends = std::isfinite(std::abs(ua)) && std::abs(ua) > 0.0 && std::isfinite(std::abs(ub)) &&
                               std::abs(ub) > 0.0 && !T.weight().has_boundary_atom_at(psi.a()) &&
                               !T.weight().has_boundary_atom_at(psi.b()) && sym.at_a.spread < 1e-3 * std::abs(ua);
  const std::size_t n = static_cast<std::size_t>(2 * K + 1);
  KernelProbe kp;
  kp.K = K;

  if (continuous_ends) {
    // f = e_w prod_{j>=0} u(psi_j z)/u(a), T f = e^{delta w} u(a) f
    const cd w = (std::log(lambda) - std::log(ua)) / delta;
    kp.construction = "product";
    kp.base_exponent_re = w.real();
    kp.base_exponent_im = w.imag();
    const double decay = std::min(gamma - w.real(), gamma + w.real() - std::log(std::abs(ub / ua)) / delta);
    OrbitGridOptions opt;
    opt.core_left = opt.core_right = std::clamp(20.0 / decay, 60.0, 3000.0);
    opt.extra_shifts_right = 1;
    const OrbitGrid grid(psi, T.space(), opt);
    const GridFunction u = grid.sample(T.weight());
    const std::size_t cols = grid.columns(), m = grid.shift();
    GridFunction P = grid.constant(1.0);
    for (std::size_t l = 0; l < grid.lines(); ++l)
      for (std::size_t c = cols - m; c-- > 0;) {
        const std::size_t i = grid.index(l, c);
        P.values[i] = u.values[i] / ua * P.values[grid.index(l, c + m)];
      }
    std::vector<GridFunction> fk(n);
    parallel_for(n, [&](std::size_t idx) {
      const cd wk = w + gk_exponent(psi, static_cast<long>(idx) - K);
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < grid.size(); ++i) top = std::max(top, (wk * grid.strip_coordinate(i)).real());
      GridFunction f = grid.constant(0.0);
      for (std::size_t i = 0; i < grid.size(); ++i)
        f.values[i] = std::exp(wk * grid.strip_coordinate(i) - top) * P.values[i];
      fk[idx] = grid.scale(f, 1.0 / grid.norm(f));
    });
    kp.eigenvector_residuals.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const GridFunction r = grid.axpy(-lambda, fk[k], grid.forward(u, fk[k]));
      kp.eigenvector_residuals[k] = grid.norm(r);
    }
    Eigen::MatrixXcd gram(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        gram(i, j) = grid.inner(fk[i], fk[j]);
        gram(j, i) = std::conj(gram(i, j));
      }
    fill_rank(kp, gram, kDefaultSeed);
    return kp;
  }

  // Inverse iteration on the finite section, seeded with e_w.
  kp.construction = "inverse_iteration";
  const cd w = std::log(lambda) / delta;
  kp.base_exponent_re = w.real();
  kp.base_exponent_im = w.imag();
  const std::size_t N = T.order();
  const std::vector<double> nrm = monomial_norms(T.space(), N);
  const Eigen::MatrixXcd M = T.galerkin();
  Eigen::MatrixXcd S = M;
  S.diagonal().array() -= lambda;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(S);
  const TaylorSeries seed = eigenfunction(psi, w, N);
  Eigen::VectorXcd x(N + 1);
  for (std::size_t k = 0; k <= N; ++k) x(k) = seed[k] * nrm[k];
  x.normalize();
  double res = 1.0;
  for (int it = 0; it < 50 && res > 1e-6; ++it) {
    x = lu.solve(x);
    if (!x.allFinite()) break;
    x.normalize();
    res = (M * x - lambda * x).norm();
  }
  if (!(res <= 1e-6)) throw Error(ErrorKind::NoEigenvectorFound, "inverse iteration residual " + std::to_string(res));
  TaylorSeries f(N);
  for (std::size_t k = 0; k <= N; ++k) f[k] = x(k) / nrm[k];
  const std::vector<TaylorSeries> g = gk_family(psi, K, N);
  std::vector<TaylorSeries> fk(n);
  for (std::size_t k = 0; k < n; ++k) {
    fk[k] = mul(g[k], f);
    fk[k] = scale(fk[k], 1.0 / norm(fk[k], T.space()));
    kp.eigenvector_residuals.push_back(norm(sub(T.apply(fk[k]), scale(fk[k], lambda)), T.space()));
  }
  Eigen::MatrixXcd gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram(i, j) = inner(fk[i], fk[j], T.space());
  fill_rank(kp, gram, kDefaultSeed);
  return kp;
}

SurjectivityProbe surjectivity_probe(const WCOperator& T, cd lambda, const std::vector<TaylorSeries>& targets,
                                     double tolerance, bool throw_on_failure) {
  SurjectivityProbe out;
  const std::size_t N = T.order();
  std::optional<GalerkinSolver> galerkin;
  const auto lsq = [&](const TaylorSeries& y) {
    if (!galerkin) galerkin.emplace(T, lambda);
    return TargetResidual{galerkin->solve_residual(y.resized(N)), "galerkin_lsq", 0};
  };

  if (!T.is_hyperbolic()) {
    for (const auto& y : targets) out.per_target.push_back(lsq(y));
  } else {
    const Automorphism& psi = T.automorphism();
    const AnnulusPrediction ann = predict_annuli(T);
    const double gamma = T.space().gamma(), delta = psi.shift(), mod = std::abs(lambda);
    const double goal = 1e-3 * tolerance;
    if (mod > ann.outer_upper || mod < ann.inner_lower) {
      const bool fwd = mod > ann.outer_upper;
      const int M = neumann_terms(fwd ? ann.outer_upper / mod : mod / ann.inner_lower, goal);
      for (const auto& y : targets) {
        const ResolventResult r = fwd ? resolvent_forward(T, y, lambda, M) : resolvent_backward(T, y, lambda, M);
        out.per_target.push_back({r.residual, fwd ? "neumann_forward" : "neumann_backward", M});
      }
    } else if (ann.in_window(lambda)) {
      const double mu = std::max(0.0, gamma + std::log(ann.A_plus / mod) / delta) + 0.5;
      const double nu = std::max(0.0, gamma + std::log(mod / ann.B_minus) / delta) + 0.5;
      out.split_m = static_cast<int>(std::ceil(mu));
      out.split_n = static_cast<int>(std::ceil(nu));
      const double ga = std::pow(ann.deriv_a, gamma), gb = std::pow(ann.deriv_b, gamma);
      const double rate_fwd = std::max(ann.A_plus * std::pow(ann.deriv_a, out.split_m) / ga, ann.B_plus / gb) / mod;
      const double rate_bwd = mod / std::min(ann.A_minus / ga, ann.B_minus * std::pow(ann.deriv_b, out.split_n) / gb);
      const int M = neumann_terms(std::max(rate_fwd, rate_bwd), goal);
      const double decay = std::min(std::log(mod / ann.inclusion_inner), std::log(ann.inclusion_outer / mod)) / delta;
      OrbitGridOptions opt;
      opt.core_left = opt.core_right = std::clamp(20.0 / decay, 60.0, 3000.0);
      opt.extra_shifts_left = opt.extra_shifts_right = M + 2;
      const OrbitGrid grid(psi, T.space(), opt);
      const GridFunction u = grid.sample(T.weight());
      for (const auto& y : targets) {
        const Decomposition d = decompose(y, psi, out.split_m, out.split_n, T.space());
        GridFunction x = grid.constant(0.0);
        GridFunction term = grid.scale(grid.sample(d.part1), 1.0 / lambda);
        for (int j = 0; j < M; ++j) {
          x = grid.add(x, term);
          term = grid.scale(grid.forward(u, term), 1.0 / lambda);
        }
        term = grid.backward(u, grid.sample(d.part2));
        for (int j = 0; j < M; ++j) {
          x = grid.axpy(-1.0, term, x);
          term = grid.scale(grid.backward(u, term), lambda);
        }
        const GridFunction yg = grid.sample(y);
        const GridFunction r = grid.axpy(-1.0, yg, grid.axpy(-1.0, grid.forward(u, x), grid.scale(x, lambda)));
        out.per_target.push_back({grid.norm(r) / grid.norm(yg), "split", M});
      }
    } else {
      for (const auto& y : targets) out.per_target.push_back(lsq(y));
    }
  }

  out.max_residual = 0.0;
  for (const auto& t : out.per_target) out.max_residual = std::max(out.max_residual, t.residual);
  if (!(out.max_residual < tolerance)) {
    out.success = false;
    if (throw_on_failure) {
      std::ostringstream os;
      os << "best max residual " << out.max_residual << " >= tolerance " << tolerance;
      throw Error(ErrorKind::ProbeFailed, os.str());
    }
  }
  return out;
}

RatioLimits omega_ratio_limits(const Automorphism& psi, double mu, double nu) {
  const OmegaWeight w = omega_weight(psi, mu, nu, 0);
  const auto ratio = [&](cd z) { return w.expr.evaluate(psi(z)) / w.expr.evaluate(z); };
  RatioLimits r;
  const double t = std::ldexp(1.0, -20);
  r.value_a = ratio(psi.a() * (1.0 - t));
  r.value_b = ratio(psi.b() * (1.0 - t));
  r.at_a = std::abs(r.value_a);
  r.at_b = std::abs(r.value_b);
  return r;
}

WeightExpr omega_ratio_expr(const Automorphism& psi, double mu, double nu) {
  // c - psi(z) = (c - z) / ((g c + d)(g z + d)) at a fixed point c (det = 1),
  // so the ratio is c0 (1 + q z)^{-(mu+nu)}.
  const MobiusCoeffs m = psi.coeffs().normalized();
  const cd q = m.gamma / m.delta;
  const OmegaWeight w = omega_weight(psi, mu, nu, 0);
  const cd c0 = w.expr.evaluate(psi(0.0)) / w.expr.evaluate(0.0);
  const WeightExpr z = WeightExpr::variable();
  return WeightExpr::constant(c0) *
         WeightExpr::pow(WeightExpr::constant(1.0) + WeightExpr::constant(q) * z, -(mu + nu));
}

WeightSymbol twisted_weight(const WeightSymbol& u, const Automorphism& psi, double mu, double nu,
                            std::size_t order) {
  if (mu < 0.0 || nu < 0.0) throw Error(ErrorKind::InvalidArgument, "omega exponents must be >= 0");
  if (mu == 0.0 && nu == 0.0) return u;
  return analyze(omega_ratio_expr(psi, mu, nu) * u.expr, psi, order, u.ladder);
}

Decomposition decompose(const TaylorSeries& f, const Automorphism& psi, double mu, double nu,
                        const SpaceSpec& space) {
  if (mu < 0.0 || nu < 0.0) throw Error(ErrorKind::InvalidArgument, "omega exponents must be >= 0");
  Decomposition d;
  d.m = static_cast<int>(std::ceil(mu));
  d.n = static_cast<int>(std::ceil(nu));
  const int total = d.m + d.n;
  const cd a = psi.a(), b = psi.b();
  const std::size_t deg = f.degree();
  const std::size_t order = deg + static_cast<std::size_t>(total);
  // powers of (a - z) and -(b - z)
  std::vector<TaylorSeries> pa(total + 1), pb(total + 1);
  TaylorSeries la(order), lb(order);
  la[0] = a;
  if (order >= 1) la[1] = -1.0;
  lb[0] = -b;
  if (order >= 1) lb[1] = 1.0;
  pa[0] = pb[0] = TaylorSeries::constant(1.0, order);
  for (int j = 1; j <= total; ++j) {
    pa[j] = mul(pa[j - 1], la);
    pb[j] = mul(pb[j - 1], lb);
  }
  const cd inv = std::pow(1.0 / (a - b), total);
  const TaylorSeries fo = f.resized(order);
  TaylorSeries q1(order), q2(order);
  double binom = 1.0;
  for (int j = 0; j <= total; ++j) {
    if (j > 0) binom = binom * static_cast<double>(total - j + 1) / static_cast<double>(j);
    if (j >= d.m) {
      // (a-z)^{j-m} (-(b-z))^{total-j}
      q1 = add(q1, scale(mul(pa[j - d.m], pb[total - j]), binom * inv));
    } else {
      // (a-z)^j (-(b-z))^{total-j} = (-1)^n (b-z)^n (a-z)^j (-(b-z))^{total-j-n}
      const double sign = (d.n % 2 == 0) ? 1.0 : -1.0;
      q2 = add(q2, scale(mul(pa[j], pb[total - j - d.n]), sign * binom * inv));
    }
  }
  q1 = mul(q1, fo);
  q2 = mul(q2, fo);
  d.part1 = FactoredFunction{static_cast<double>(d.m), 0.0, q1};
  d.part2 = FactoredFunction{0.0, static_cast<double>(d.n), q2};
  d.f1 = mul(q1, pa[d.m]);
  TaylorSeries bn = TaylorSeries::constant(1.0, order);
  TaylorSeries lbn(order);
  lbn[0] = b;
  if (order >= 1) lbn[1] = -1.0;
  for (int j = 0; j < d.n; ++j) bn = mul(bn, lbn);
  d.f2 = mul(q2, bn);

  const std::size_t qorder = 1024;
  TaylorSeries r1 = q1.resized(qorder), r2 = q2.resized(qorder);
  if (d.m - mu != 0.0) r1 = mul(r1, fractional_power(a, d.m - mu, qorder));
  if (d.n - nu != 0.0) r2 = mul(r2, fractional_power(b, d.n - nu, qorder));
  d.quotient1 = norm_with_diagnostic(r1, space);
  d.quotient2 = norm_with_diagnostic(r2, space);
  return d;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedAtScale: return "certified_at_scale";
    case Verdict::WindowEmpty: return "window_empty";
    case Verdict::Failed: return "failed";
  }
  return "failed";
}

std::vector<TaylorSeries> default_targets(std::size_t order, std::uint64_t seed) {
  std::vector<TaylorSeries> t;
  for (std::size_t j = 0; j <= 8; ++j) t.push_back(TaylorSeries::monomial(j, order));
  std::mt19937_64 rng(seed);
  for (int r = 0; r < 3; ++r) {
    TaylorSeries p(order);
    for (std::size_t k = 0; k <= 8 && k <= order; ++k) {
      const double re = uniform(rng);
      p[k] = cd(re, uniform(rng));
    }
    t.push_back(p);
  }
  return t;
}

UniversalityReport caradus_report(const WCOperator& T, cd lambda, long K, double tolerance, std::uint64_t seed) {
  UniversalityReport rep;
  rep.tolerance = tolerance;
  rep.seed = seed;
  rep.annulus = predict_annuli(T);
  rep.window_check = rep.annulus.in_window(lambda);
  if (!rep.annulus.universality_window_nonempty) {
    rep.verdict = Verdict::WindowEmpty;
    rep.diagnostics.push_back("window empty: inclusion_inner >= inclusion_outer");
    return rep;
  }
  if (!rep.window_check) rep.diagnostics.push_back("lambda outside the universality window");
  try {
    rep.kernel = kernel_probe(T, lambda, K);
  } catch (const Error& e) {
    rep.diagnostics.push_back(std::string(to_string(e.kind())) + ": " + e.what());
  }
  try {
    const std::vector<TaylorSeries> targets = default_targets(T.order(), seed);
    rep.num_targets = static_cast<int>(targets.size());
    rep.surjectivity = surjectivity_probe(T, lambda, targets, tolerance, false);
    if (!rep.surjectivity->success) rep.diagnostics.push_back("ProbeFailed: surjectivity residual above tolerance");
  } catch (const Error& e) {
    rep.diagnostics.push_back(std::string(to_string(e.kind())) + ": " + e.what());
  }
  const bool kernel_ok = rep.kernel && rep.kernel->gram_rank == static_cast<int>(2 * K + 1);
  if (rep.kernel && !kernel_ok) rep.diagnostics.push_back("Gram rank below 2K+1");
  const bool surj_ok = rep.surjectivity && rep.surjectivity->max_residual < tolerance;
  rep.verdict = rep.window_check && kernel_ok && surj_ok ? Verdict::CertifiedAtScale : Verdict::Failed;
  return rep;
}

}  // namespace wcospec
