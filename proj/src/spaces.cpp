#include "wcospec/spaces.hpp"

#include <cmath>
#include <numbers>

#include "wcospec/error.hpp"
#include "wcospec/kernels.hpp"
#include "wcospec/parallel.hpp"
#include "wcospec/quadrature.hpp"

namespace wcospec {

namespace {
constexpr double kPi = std::numbers::pi;

void require_p2(const SpaceSpec& s) {
  if (s.p != 2.0) throw Error(ErrorKind::UnsupportedExponent, "operation needs p = 2");
}

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

SpaceSpec SpaceSpec::hardy(double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
  return SpaceSpec{Kind::Hardy, 0.0, p};
}

SpaceSpec SpaceSpec::bergman(double sigma, double p) {
  if (!(sigma > -1.0)) throw Error(ErrorKind::InvalidArgument, "Bergman sigma must be > -1");
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
  return SpaceSpec{Kind::Bergman, sigma, p};
}

std::string SpaceSpec::to_string() const {
  std::string s = is_hardy() ? "hardy" : "bergman:" + fmt_num(sigma);
  if (p != 2.0) s += ";p=" + fmt_num(p);
  return s;
}

SpaceSpec parse_space(std::string_view text, double p) {
  const std::string t(text);
  if (t == "hardy") return SpaceSpec::hardy(p);
  if (t.rfind("bergman:", 0) == 0) {
    std::size_t used = 0;
    double sigma = 0.0;
    try {
      sigma = std::stod(t.substr(8), &used);
    } catch (...) {
      used = 0;
    }
    if (used == 0 || used != t.size() - 8)
      throw Error(ErrorKind::InvalidArgument, "malformed Bergman exponent in '" + t + "'");
    return SpaceSpec::bergman(sigma, p);
  }
  throw Error(ErrorKind::InvalidArgument, "space must be 'hardy' or 'bergman:<sigma>', got '" + t + "'");
}

double monomial_norm(const SpaceSpec& space, std::size_t n) {
  require_p2(space);
  if (space.is_hardy()) return 1.0;
  const double s = space.sigma, k = static_cast<double>(n);
  return std::exp(0.5 * (std::log(kPi) + std::lgamma(k + 1.0) + std::lgamma(s + 1.0) - std::lgamma(k + s + 2.0)));
}

std::vector<double> monomial_norms(const SpaceSpec& space, std::size_t order) {
  std::vector<double> w(order + 1);
  for (std::size_t k = 0; k <= order; ++k) w[k] = monomial_norm(space, k);
  return w;
}

NormResult norm_with_diagnostic(const TaylorSeries& f, const SpaceSpec& space) {
  const std::vector<double> nrm = monomial_norms(space, f.order());
  std::vector<double> w(nrm.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = nrm[k] * nrm[k];
  const double total = kernels::weighted_norm2(f.coeffs(), w);
  const std::size_t n = f.order();
  const std::size_t lo = n > kTailWidth ? n - kTailWidth : 0;
  const double tail = kernels::weighted_norm2(std::span<const cd>(f.coeffs()).subspan(lo),
                                              std::span<const double>(w).subspan(lo));
  NormResult r;
  r.value = std::sqrt(total);
  r.tail_fraction = total > 0.0 ? tail / total : 0.0;
  r.truncation_suspect = r.tail_fraction > kTailThreshold;
  return r;
}

double norm(const TaylorSeries& f, const SpaceSpec& space) { return norm_with_diagnostic(f, space).value; }

cd inner(const TaylorSeries& f, const TaylorSeries& g, const SpaceSpec& space) {
  const std::size_t n = std::max(f.order(), g.order());
  const std::vector<double> nrm = monomial_norms(space, n);
  std::vector<double> w(n + 1);
  for (std::size_t k = 0; k <= n; ++k) w[k] = nrm[k] * nrm[k];
  const TaylorSeries fp = f.resized(n), gp = g.resized(n);
  return kernels::weighted_inner(fp.coeffs(), gp.coeffs(), w);
}

namespace {

// Mean of |f|^p over the circle of radius t, trapezoid rule.
double circle_mean(const TaylorSeries& f, double t, double p, int nodes) {
  std::vector<double> vals(nodes);
  parallel_for(static_cast<std::size_t>(nodes), [&](std::size_t k) {
    const cd z = std::polar(t, 2.0 * kPi * static_cast<double>(k) / nodes);
    vals[k] = std::pow(std::abs(f.evaluate(z)), p);
  });
  double s = 0.0;
  for (double v : vals) s += v;
  return s / nodes;
}

}  // namespace

double pnorm_quadrature(const TaylorSeries& f, const SpaceSpec& space, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw Error(ErrorKind::InvalidArgument, "radius must lie in (0, 1]");
  const double p = space.p;
  if (space.is_hardy()) return std::pow(circle_mean(f, rho, p, kCircleNodes), 1.0 / p);
  // (1/2) int_0^{rho^2} (1-s)^sigma M(sqrt s) ds with M the full-circle integral.
  const double sigma = space.sigma;
  const int n_radial = 96, n_angles = 2048;
  double integral = 0.0;
  if (rho == 1.0) {
    // s = (1+x)/2, (1-s)^sigma = 2^-sigma (1-x)^sigma
    const GaussRule g = gauss_jacobi(n_radial, sigma, 0.0);
    for (int k = 0; k < n_radial; ++k) {
      const double s = 0.5 * (1.0 + g.nodes[k]);
      const double m = 2.0 * kPi * circle_mean(f, std::sqrt(s), p, n_angles);
      integral += g.weights[k] * m;
    }
    integral *= 0.25 * std::pow(2.0, -sigma);
  } else {
    const double r2 = rho * rho;
    const GaussRule g = gauss_jacobi(n_radial, 0.0, 0.0);
    for (int k = 0; k < n_radial; ++k) {
      const double s = 0.5 * r2 * (1.0 + g.nodes[k]);
      const double m = 2.0 * kPi * circle_mean(f, std::sqrt(s), p, n_angles);
      integral += g.weights[k] * std::pow(1.0 - s, sigma) * m;
    }
    integral *= 0.25 * r2;
  }
  return std::pow(integral, 1.0 / p);
}

}  // namespace wcospec
