#include "wcospec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wcospec/error.hpp"
#include "wcospec/parallel.hpp"

namespace wcospec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Window half-width so that a tail decaying like exp(-2 decay |x|) is below e^-40.
double window_for(double decay, double cap) {
  if (!(decay > 0.0)) return cap;
  return std::clamp(20.0 / decay, 60.0, cap);
}

// Slowest decay rate (per unit of Re W) of |f|^2 times the weight at the two ends.
double factored_decay(const FactoredFunction& f, double gamma) {
  return std::min(gamma + f.exp_a.real(), gamma + f.exp_b.real());
}

double term_rate(const std::vector<double>& norms) {
  const std::size_t n = norms.size();
  if (n < 4) return 0.0;
  const std::size_t i0 = n / 2, i1 = n - 1;
  if (!(norms[i0] > 0.0) || !(norms[i1] > 0.0)) return 0.0;
  return std::pow(norms[i1] / norms[i0], 1.0 / static_cast<double>(i1 - i0));
}

void check_divergence(const std::vector<double>& norms, const char* what) {
  const std::size_t n = norms.size();
  if (n <= static_cast<std::size_t>(kDivergenceRun)) return;
  for (std::size_t k = n - kDivergenceRun; k < n; ++k)
    if (!(norms[k] > norms[k - 1])) return;
  throw Error(ErrorKind::SeriesDiverging, std::string(what) + ": term norms grew over " +
                                              std::to_string(kDivergenceRun) + " consecutive terms");
}

enum class Direction { Forward, Backward };

ResolventResult resolvent_impl(const WCOperator& T, const FactoredFunction& f, cd lambda, int M, Direction dir) {
  if (M < 1) throw Error(ErrorKind::InvalidArgument, "resolvent needs at least one term");
  if (dir == Direction::Backward && lambda == cd{} && M > 1) M = 1;
  const char* what = dir == Direction::Forward ? "forward resolvent" : "backward resolvent";
  ResolventResult res;
  res.terms = M;

  // Finite-section partial sum.
  const SpaceSpec& space = T.space();
  const std::size_t N = T.order();
  const TaylorSeries fs = T.is_hyperbolic() ? f.to_series(T.automorphism(), N) : f.poly.resized(N);
  {
    TaylorSeries term, sum(N);
    if (dir == Direction::Forward) {
      term = scale(fs, 1.0 / lambda);
      for (int n = 0; n < M; ++n) {
        sum = add(sum, term);
        term = scale(T.apply(term), 1.0 / lambda);
      }
    } else {
      const WCOperator Tinv = T.inverse();
      term = Tinv.apply(fs);
      for (int n = 0; n < M; ++n) {
        sum = sub(sum, term);
        term = scale(Tinv.apply(term), lambda);
      }
    }
    res.partial_sum = sum;
    const double nf = norm(fs, space);
    const TaylorSeries r = sub(sub(scale(sum, lambda), T.apply(sum)), fs);
    res.finite_section_residual = norm(r, space) / (nf > 0.0 ? nf : 1.0);
  }

  if (!T.is_hyperbolic()) {
    res.residual = res.finite_section_residual;
    return res;
  }

  const AnnulusPrediction ann = predict_annuli(T);
  res.margin = dir == Direction::Forward ? (std::abs(lambda) - ann.inclusion_inner) / ann.inclusion_inner
                                         : (ann.inclusion_outer - std::abs(lambda)) / ann.inclusion_outer;

  OrbitGridOptions opt;
  // iterates drift by one shift per term, so the window carries the drift too
  const double L = window_for(factored_decay(f, space.gamma()), 600.0) + (M + 1) * T.automorphism().shift();
  opt.core_left = opt.core_right = L;
  if (dir == Direction::Forward) {
    opt.extra_shifts_right = M + 1;
  } else {
    opt.extra_shifts_left = M + 1;
    opt.extra_shifts_right = 1;
  }
  const OrbitGrid grid(T.automorphism(), space, opt);
  const GridFunction u = grid.sample(T.weight());
  const GridFunction fg = grid.sample(f);
  const double nf = grid.norm(fg);
  if (!(nf > 0.0)) throw Error(ErrorKind::InvalidArgument, "resolvent of the zero function");

  GridFunction sum = grid.constant(0.0);
  GridFunction term = dir == Direction::Forward ? grid.scale(fg, 1.0 / lambda) : grid.backward(u, fg);
  const cd sign = dir == Direction::Forward ? cd(1.0) : cd(-1.0);
  std::vector<double> term_norms;
  for (int n = 0; n < M; ++n) {
    sum = grid.axpy(sign, term, sum);
    const GridFunction r = grid.axpy(-1.0, fg, grid.axpy(-1.0, grid.forward(u, sum), grid.scale(sum, lambda)));
    res.residual_history.push_back(grid.norm(r) / nf);
    term_norms.push_back(grid.norm(term));
    if (!std::isfinite(term_norms.back())) throw Error(ErrorKind::SeriesDiverging, std::string(what) + " overflowed");
    check_divergence(term_norms, what);
    if (n + 1 < M)
      term = dir == Direction::Forward ? grid.scale(grid.forward(u, term), 1.0 / lambda)
                                       : grid.scale(grid.backward(u, term), lambda);
  }
  res.residual = res.residual_history.back();
  res.rate = term_rate(term_norms);
  res.slow_convergence = res.rate > kSlowConvergenceRate;
  return res;
}

}  // namespace

AnnulusPrediction predict_annuli(const WeightSymbol& u, const Automorphism& psi, const SpaceSpec& space) {
  AnnulusPrediction p;
  p.gamma = space.gamma();
  p.deriv_a = psi.lambda_a();
  p.deriv_b = psi.lambda_b();
  p.A_plus = u.A_plus();
  p.A_minus = u.A_minus();
  p.B_plus = u.B_plus();
  p.B_minus = u.B_minus();
  const double sa = std::pow(p.deriv_a, p.gamma), sb = std::pow(p.deriv_b, p.gamma);
  p.outer_upper = std::max(p.A_plus / sa, p.B_plus / sb);
  p.inner_lower = std::min(p.A_minus / sa, p.B_minus / sb);
  p.inclusion_inner = p.B_plus / sb;
  p.inclusion_outer = p.A_minus / sa;
  p.universality_window_nonempty = p.inclusion_inner < p.inclusion_outer;
  return p;
}

AnnulusPrediction predict_annuli(const WCOperator& T) {
  return predict_annuli(T.symbol(), T.automorphism(), T.space());
}

namespace {

// ||T^n f||^{1/n} on the orbit grid, accumulated in log space. log_f gives
// log|f| at a grid node.
template <class LogF>
GelfandSequence grid_iterates(const WCOperator& T, int n_max, OrbitGridOptions go, LogF log_f_at) {
  go.extra_shifts_right = n_max;
  const double drift = n_max * T.automorphism().shift();
  go.core_left += drift;
  go.core_right += drift;
  const OrbitGrid grid(T.automorphism(), T.space(), go);
  const std::size_t lines = grid.lines(), m = grid.shift();
  const std::size_t lo = grid.core_lo(), hi = grid.core_hi();
  std::vector<double> log_u(grid.size()), log_f(grid.size());
  const WeightExpr& u = T.weight();
  parallel_for(grid.size(), [&](std::size_t i) {
    log_u[i] = std::log(std::abs(u.evaluate(grid.z(i))));
    log_f[i] = log_f_at(grid, i);
  });
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!std::isfinite(log_u[i])) throw Error(ErrorKind::IllConditioned, "weight is not finite on the orbit grid");

  const std::size_t core = hi - lo;
  std::vector<double> acc(lines * core, 0.0), terms(lines * core);
  const auto lognorm2 = [&](std::size_t shift) {
    for (std::size_t l = 0; l < lines; ++l)
      for (std::size_t c = 0; c < core; ++c) {
        const std::size_t i = grid.index(l, lo + c);
        terms[l * core + c] = grid.log_weight(i) + 2.0 * acc[l * core + c] + 2.0 * log_f[grid.index(l, lo + c + shift)];
      }
    const double total = log_sum_exp(terms);
    // share of the outermost shift of columns on either side
    std::vector<double> edge;
    for (std::size_t l = 0; l < lines; ++l)
      for (std::size_t c = 0; c < core; ++c)
        if (c < m || c + m >= core) edge.push_back(terms[l * core + c]);
    return std::pair{total, log_sum_exp(edge) - total};
  };

  const double log_f0 = 0.5 * lognorm2(0).first;
  if (!std::isfinite(log_f0)) throw Error(ErrorKind::InvalidArgument, "Gelfand probe must be nonzero");
  GelfandSequence seq;
  seq.method = "orbit_grid";
  for (int n = 1; n <= n_max; ++n) {
    const std::size_t step = static_cast<std::size_t>(n - 1) * m;
    for (std::size_t l = 0; l < lines; ++l)
      for (std::size_t c = 0; c < core; ++c) acc[l * core + c] += log_u[grid.index(l, lo + c + step)];
    const auto [ln2, edge_share] = lognorm2(static_cast<std::size_t>(n) * m);
    seq.values.push_back(std::exp((0.5 * ln2 - log_f0) / n));
    seq.truncation_suspect.push_back(edge_share > std::log(1e-8));
  }
  return seq;
}

void check_probe(const WCOperator& T, const TaylorSeries& f, int n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  if (f.degree() > std::max<std::size_t>(1, T.order() / 16))
    throw Error(ErrorKind::InvalidArgument, "probe degree must be at most N/16");
  if (!(norm(f.resized(T.order()), T.space()) > 0.0)) throw Error(ErrorKind::InvalidArgument, "Gelfand probe must be nonzero");
}

}  // namespace

GelfandSequence gelfand_radius(const WCOperator& T, const TaylorSeries& f, int n_max) {
  if (!T.is_hyperbolic()) return gelfand_radius_finite_section(T, f, n_max);
  check_probe(T, f, n_max);
  OrbitGridOptions go;
  go.core_left = go.core_right = window_for(T.space().gamma(), 4000.0);
  const TaylorSeries poly = f.resized(f.degree() + 1);
  return grid_iterates(T, n_max, go, [&](const OrbitGrid& g, std::size_t i) { return std::log(std::abs(poly.evaluate(g.z(i)))); });
}

GelfandSequence gelfand_radius_finite_section(const WCOperator& T, const TaylorSeries& f, int n_max) {
  check_probe(T, f, n_max);
  const std::size_t N = T.order();
  TaylorSeries x = f.resized(N);
  const double n0 = norm(x, T.space());
  GelfandSequence seq;
  seq.method = "finite_section";
  double log_scale = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    x = T.apply(x);
    const NormResult nr = norm_with_diagnostic(x, T.space());
    if (!std::isfinite(nr.value) || !(nr.value > 0.0))
      throw Error(ErrorKind::IllConditioned, "iterate norm is not finite");
    log_scale += std::log(nr.value);
    x = scale(x, 1.0 / nr.value);
    seq.values.push_back(std::exp((log_scale - std::log(n0)) / n));
    seq.truncation_suspect.push_back(nr.truncation_suspect);
  }
  return seq;
}

GelfandSequence gelfand_radius_exact(const WCOperator& T, int n_max, const ExactGelfandOptions& opt) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  const double gamma = T.space().gamma();
  const double s = opt.probe_fraction * gamma;
  OrbitGridOptions go;
  go.steps_per_shift = opt.steps_per_shift;
  go.bergman_lines = opt.bergman_lines;
  go.core_left = go.core_right = window_for(gamma - s, opt.max_window);
  return grid_iterates(T, n_max, go, [s](const OrbitGrid& g, std::size_t i) {
    return -s * (g.log_a_minus_z(i).real() + g.log_b_minus_z(i).real());
  });
}

std::vector<double> operator_norm_sequence(const Eigen::MatrixXcd& M, int n_max) {
  std::vector<double> out;
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(M.rows(), M.cols());
  double log_scale = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    P = M * P;
    const double s = Eigen::BDCSVD<Eigen::MatrixXcd>(P).singularValues()(0);
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::IllConditioned, "matrix power norm not finite");
    log_scale += std::log(s);
    P /= s;
    out.push_back(std::exp(log_scale / n));
  }
  return out;
}

std::vector<cd> truncated_eigenvalues(const Eigen::MatrixXcd& M) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::EigSolverFailure, "complex eigensolver did not converge");
  std::vector<cd> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cd x, cd y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
    return std::arg(x) < std::arg(y);
  });
  return ev;
}

ResolventResult resolvent_forward(const WCOperator& T, const FactoredFunction& f, cd lambda, int M) {
  return resolvent_impl(T, f, lambda, M, Direction::Forward);
}
ResolventResult resolvent_forward(const WCOperator& T, const TaylorSeries& f, cd lambda, int M) {
  return resolvent_impl(T, FactoredFunction{0.0, 0.0, f}, lambda, M, Direction::Forward);
}
ResolventResult resolvent_backward(const WCOperator& T, const FactoredFunction& f, cd lambda, int M) {
  return resolvent_impl(T, f, lambda, M, Direction::Backward);
}
ResolventResult resolvent_backward(const WCOperator& T, const TaylorSeries& f, cd lambda, int M) {
  return resolvent_impl(T, FactoredFunction{0.0, 0.0, f}, lambda, M, Direction::Backward);
}

FactoredFunction inclusion_test_function(const WCOperator& T, double margin) {
  const WeightSymbol& w = T.symbol();
  const double gamma = T.space().gamma(), delta = T.automorphism().shift();
  const double alpha = 2.0 * gamma + std::log(w.A_plus() / w.B_plus()) / delta + margin;
  const double beta = 2.0 * gamma + std::log(w.A_minus() / w.B_minus()) / delta + margin;
  FactoredFunction f;
  f.exp_a = std::max(0.0, std::ceil(alpha - gamma - 1e-12));
  f.exp_b = std::max(0.0, std::ceil(beta - gamma - 1e-12));
  return f;
}

}  // namespace wcospec
