// Acceptance run: one PASS/FAIL line per criterion with the measured values.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "wcospec/universality.hpp"

using namespace wcospec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; }

TaylorSeries random_poly(std::mt19937_64& rng, std::size_t order) {
  const std::size_t deg = rng() % 33;
  TaylorSeries f(order);
  for (std::size_t k = 0; k <= deg; ++k) f[k] = cd(unit(rng), unit(rng));
  return f;
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = seconds_since(t0);
  std::printf("%s criterion %d: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), t);
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double bergman_monomial_oracle(double sigma, int n) {
  boost::math::quadrature::tanh_sinh<double> radial;
  auto inner = [&](double r, double rc) {
    const double one_minus_r = r > 0.5 ? rc : 1.0 - r;
    const double w = std::pow(one_minus_r * (1.0 + r), sigma);
    auto angular = [&](double t) { return std::pow(std::norm(std::polar(r, t)), n) * w * r; };
    return boost::math::quadrature::trapezoidal(angular, 0.0, 2.0 * M_PI, 1e-14);
  };
  return std::sqrt(radial.integrate(inner, 0.0, 1.0, 1e-14));
}

const Automorphism kPsi = Automorphism::canonical(0.5);
constexpr std::size_t N = 512;

}  // namespace

int main() {
  report(1, [] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (double r : {0.3, 0.5, 0.7}) {
      for (const SpaceSpec sp : {SpaceSpec::hardy(), SpaceSpec::bergman(0), SpaceSpec::bergman(1)}) {
        const WCOperator V = normalized_isometry(Automorphism::canonical(r), sp, N);
        for (int i = 0; i < 100; ++i) {
          const TaylorSeries f = random_poly(rng, N);
          const double nf = norm(f, sp);
          worst = std::max(worst, std::abs(norm(V.apply(f), sp) - nf) / nf);
        }
      }
    }
    const double t = seconds_since(t0);
    return Outcome{worst < 1e-6 && t < 30.0,
                   fmt("isometry max relative error %.2e (< 1e-6), 900 cases, %.2f s (< 30 s)", worst, t)};
  });

  report(2, [] {
    double worst = 0.0, worst_fs = 0.0;
    for (long k = -5; k <= 5; ++k) {
      const EigenRelation e = gk_eigen_relation(kPsi, k, N);
      worst = std::max(worst, e.exact);
      worst_fs = std::max(worst_fs, e.finite_section);
    }
    return Outcome{worst < 1e-7, fmt("max ||C g_k - g_k|| on indices <= 256 is %.2e (< 1e-7); finite-section "
                                     "route on its guard band %.2e",
                                     worst, worst_fs)};
  });

  report(3, [] {
    const WCOperator U(parse_expr("1"), kPsi, SpaceSpec::hardy(), N);
    const KernelProbe p = kernel_probe(U, 1.0, 10);
    const bool pass = p.gram_rank == 21 && p.control_gap >= 1e6;
    return Outcome{pass, fmt("rank %d (= 21), sigma21/sigma22 of the control-augmented Gram %.2e (>= 1e6), "
                             "min relative singular value %.3f",
                             p.gram_rank, p.control_gap, p.min_singular_value)};
  });

  report(4, [] {
    double worst = 0.0;
    for (long k = -5; k <= 5; ++k) worst = std::max(worst, generator_check(kPsi, k, N));
    return Outcome{worst < 1e-6, fmt("max generator residual %.2e (< 1e-6)", worst)};
  });

  report(5, [] {
    const auto t0 = Clock::now();
    const WCOperator T(parse_expr("2+z"), kPsi, SpaceSpec::hardy(), N);
    const double fwd = gelfand_radius_exact(T, 40).values.back();
    const double inv = gelfand_radius_exact(T.inverse(), 40).values.back();
    const double t = seconds_since(t0);
    const double ef = std::abs(fwd / (3 * std::sqrt(3.0)) - 1), ei = std::abs(inv / std::sqrt(3.0) - 1);
    return Outcome{ef < 0.05 && ei < 0.05 && t < 120.0,
                   fmt("forward %.4f vs 3*sqrt3 (%.1f%%), inverse %.4f vs sqrt3 (%.1f%%), %.2f s", fwd, 100 * ef, inv,
                       100 * ei, t)};
  });

  report(6, [] {
    const WCOperator T(parse_expr("2+z"), kPsi, SpaceSpec::hardy(), 64);
    const double v = T.gelfand_sup_weight(64).sup.back();
    return Outcome{v >= 2.8 && v <= 3.05, fmt("(sup |u_64|)^(1/64) = %.4f in [2.8, 3.05]", v)};
  });

  report(7, [] {
    const WCOperator T(parse_expr("2+z"), kPsi, SpaceSpec::hardy(), N);
    const ResolventResult F = resolvent_forward(T, TaylorSeries::constant(1, N), 4.0, 80);
    const FactoredFunction tf = inclusion_test_function(T);
    const ResolventResult G = resolvent_backward(T, tf, 1.0, 80);
    return Outcome{F.residual < 1e-4 && G.residual < 1e-4,
                   fmt("F at 4 (f=1): %.2e after %d terms; G at 1 (f=(a-z)^%g (b-z)^%g): %.2e after %d terms", F.residual,
                       F.terms, tf.exp_a.real(), tf.exp_b.real(), G.residual, G.terms)};
  });

  report(8, [] {
    std::vector<TaylorSeries> targets;
    for (std::size_t j = 0; j <= 8; ++j) targets.push_back(TaylorSeries::monomial(j, N));
    double worst = 0.0;
    std::string per;
    for (const char* u : {"1", "2+z"}) {
      const WCOperator T(parse_expr(u), kPsi, SpaceSpec::hardy(), N);
      const SurjectivityProbe p = surjectivity_probe(T, 1.0, targets, 1e-3, false);
      worst = std::max(worst, p.max_residual);
      per += fmt(" u=%s: %.2e;", u, p.max_residual);
    }
    return Outcome{worst < 1e-3, fmt("max residual %.2e (< 1e-3);%s", worst, per.c_str())};
  });

  report(9, [] {
    std::mt19937_64 rng(9);
    double worst = 0.0;
    const double ex[] = {0.5, 1.0, 1.5, 2.0};
    for (int i = 0; i < 100; ++i) {
      const TaylorSeries f = random_poly(rng, 64);
      for (double mu : ex) {
        for (double nu : ex) {
          const Decomposition d = decompose(f, kPsi, mu, nu);
          const TaylorSeries s = d.f1 + d.f2;
          for (std::size_t k = 0; k <= s.order(); ++k) worst = std::max(worst, std::abs(s[k] - f[k]));
        }
      }
    }
    return Outcome{worst < 1e-12, fmt("max |f1 + f2 - f| %.2e (< 1e-12), 1600 cases", worst)};
  });

  report(10, [] {
    double worst = 0.0;
    for (double mu : {0.0, 1.0, 2.0}) {
      for (double nu : {0.0, 1.0, 2.0}) {
        const RatioLimits r = omega_ratio_limits(kPsi, mu, nu);
        worst = std::max(worst, std::abs(r.at_a - std::pow(kPsi.lambda_a(), mu)));
        worst = std::max(worst, std::abs(r.at_b - std::pow(kPsi.lambda_b(), nu)));
      }
    }
    return Outcome{worst < 1e-3, fmt("max limit error %.2e (< 1e-3)", worst)};
  });

  report(11, [] {
    double worst = 0.0;
    for (double sigma : {0.0, 1.0, 2.5})
      for (int n = 0; n <= 16; ++n)
        worst = std::max(worst, std::abs(monomial_norm(SpaceSpec::bergman(sigma), n) - bergman_monomial_oracle(sigma, n)));
    return Outcome{worst < 1e-8, fmt("max |closed form - 2-D quadrature| %.2e (< 1e-8)", worst)};
  });

  report(12, [] {
    const auto t0 = Clock::now();
    std::ostringstream out, err;
    const int code = cli::run({"certify", "--symbol", "1", "--auto", "canonical:0.5", "--lambda", "1", "--space", "hardy"},
                              out, err);
    const double t = seconds_since(t0);
    const auto j = nlohmann::json::parse(out.str());
    bool all = !j["result"]["checks"].empty();
    std::string names;
    for (const auto& c : j["result"]["checks"]) {
      all = all && c["pass"].get<bool>();
      names += " " + c["name"].get<std::string>() + (c["pass"].get<bool>() ? "=ok" : "=FAILED");
    }
    return Outcome{code == 0 && all && t < 180.0, fmt("exit %d, verdict %s, checks:%s, %.2f s", code,
                                                      j["result"]["verdict"].get<std::string>().c_str(), names.c_str(), t)};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
