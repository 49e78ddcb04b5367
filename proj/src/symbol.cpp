#include "wcospec/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wcospec/error.hpp"
#include "wcospec/parallel.hpp"

namespace wcospec {

namespace {

constexpr double kPi = std::numbers::pi;

double rung_radius(int j) { return 1.0 - std::ldexp(1.0, -j); }

}  // namespace

int winding_check(const WeightExpr& u, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidArgument, "winding radius must lie in (0, 1)");
  // Refine until no phase step exceeds pi/4, so the count is unambiguous.
  for (int samples = 4096; samples <= (1 << 20); samples *= 4) {
    std::vector<cd> vals(samples);
    parallel_for(samples, [&](std::size_t k) {
      vals[k] = u.evaluate(std::polar(rho, 2.0 * kPi * static_cast<double>(k) / samples));
    });
    double total = 0.0, worst = 0.0;
    for (int k = 0; k < samples; ++k) {
      if (!(std::abs(vals[k]) >= 1e-12))
        throw Error(ErrorKind::ZeroOnCircle, "weight vanishes on the circle |z| = " + std::to_string(rho));
      const double step = std::arg(vals[(k + 1) % samples] / vals[k]);
      worst = std::max(worst, std::abs(step));
      total += step;
    }
    if (worst < kPi / 4) return static_cast<int>(std::lround(total / (2.0 * kPi)));
  }
  throw Error(ErrorKind::IllConditioned, "winding number unresolved: phase varies too fast on the circle");
}

ModulusBounds modulus_bounds(const WeightExpr& u, const SamplingLadder& ladder) {
  const std::size_t per = static_cast<std::size_t>(ladder.angles);
  const std::size_t total = per * static_cast<std::size_t>(ladder.rungs);
  std::vector<double> mods(total);
  parallel_for(total, [&](std::size_t idx) {
    const int j = static_cast<int>(idx / per) + 1;
    const double theta = 2.0 * kPi * (static_cast<double>(idx % per) + 0.5) / static_cast<double>(per);
    mods[idx] = std::abs(u.evaluate(std::polar(rung_radius(j), theta)));
  });
  ModulusBounds b;
  b.sup = std::abs(u.evaluate(0.0));
  b.inf = b.sup;
  for (double m : mods) {
    if (!std::isfinite(m))
      throw Error(ErrorKind::IllConditioned, "weight is not finite at a disk sample point");
    b.sup = std::max(b.sup, m);
    b.inf = std::min(b.inf, m);
  }
  // The circle minimum bounds |u| on the disk only when u has no zeros.
  for (int j = 1; j <= std::min(ladder.rungs, 10); ++j) {
    int w = 0;
    try {
      w = winding_check(u, rung_radius(j));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroOnCircle) throw;
      w = 1;
    }
    if (w != 0) {
      b.zeros_inside = w;
      b.inf = 0.0;
      break;
    }
  }
  return b;
}

BoundaryLimit boundary_limit(const WeightExpr& u, cd c, const SamplingLadder& ladder) {
  BoundaryLimit lim;
  const int rungs = ladder.rungs, fan = ladder.fan_angles;
  lim.rung_max.assign(rungs, 0.0);
  lim.rung_min.assign(rungs, std::numeric_limits<double>::infinity());
  for (int j = 1; j <= rungs; ++j) {
    const double eps = std::ldexp(1.0, -j);
    for (int k = 0; k <= fan; ++k) {
      // k == fan is the radial point.
      const double theta = k == fan ? 0.0 : -kPi / 2 + kPi * (k + 0.5) / fan;
      const cd z = c * (1.0 - eps * std::polar(1.0, theta));
      if (std::abs(z) >= 1.0) continue;
      const double m = std::abs(u.evaluate(z));
      if (!std::isfinite(m)) continue;
      lim.rung_max[j - 1] = std::max(lim.rung_max[j - 1], m);
      lim.rung_min[j - 1] = std::min(lim.rung_min[j - 1], m);
    }
  }
  const int first = std::max(0, rungs - ladder.limit_rungs);
  lim.plus = 0.0;
  lim.minus = std::numeric_limits<double>::infinity();
  for (int j = first; j < rungs; ++j) {
    lim.plus = std::max(lim.plus, lim.rung_max[j]);
    lim.minus = std::min(lim.minus, lim.rung_min[j]);
  }
  if (!std::isfinite(lim.minus)) lim.minus = 0.0;
  lim.spread = lim.plus - lim.minus;
  // Monotone approach of the rung maxima and minima over the tail.
  int up = 0, down = 0;
  for (int j = first + 1; j < rungs; ++j) {
    const double d = lim.rung_max[j] - lim.rung_max[j - 1];
    if (d > 0) ++up;
    if (d < 0) ++down;
  }
  lim.monotone = up == 0 || down == 0;
  return lim;
}

WeightSymbol analyze(const WeightExpr& u, const Automorphism& psi, std::size_t order,
                     const SamplingLadder& ladder) {
  WeightSymbol s;
  s.expr = u;
  s.ladder = ladder;
  const ModulusBounds mb = modulus_bounds(u, ladder);
  s.sup_norm_est = mb.sup;
  s.inf_modulus_est = mb.inf;
  if (!(mb.inf >= ladder.invertibility_threshold))
    throw Error(ErrorKind::NotInvertible,
                mb.zeros_inside ? "weight has zeros in the disk" :
                                  "weight modulus infimum " + std::to_string(mb.inf) + " is below threshold");
  s.series = u.to_series(order);
  check_conditioning(s.series, "weight series");
  s.at_a = boundary_limit(u, psi.a(), ladder);
  s.at_b = boundary_limit(u, psi.b(), ladder);
  s.heuristic = u.has_boundary_atom_at(psi.a()) || u.has_boundary_atom_at(psi.b()) ||
                s.at_a.spread > 1e-4 || s.at_b.spread > 1e-4;
  return s;
}

Automorphism parse_automorphism(std::string_view spec) {
  auto bad = [&](const std::string& why) {
    return Error(ErrorKind::InvalidArgument, "automorphism spec '" + std::string(spec) + "': " + why);
  };
  const std::string text(spec);
  if (text.rfind("canonical:", 0) == 0) {
    const cd r = parse_constant(text.substr(10));
    if (r.imag() != 0.0) throw bad("r must be real");
    return Automorphism::canonical(r.real());
  }
  if (text.rfind("fixed:", 0) == 0) {
    const auto semi = text.find(";deriv:");
    if (semi == std::string::npos) throw bad("missing ';deriv:'");
    const std::string points = text.substr(6, semi - 6);
    // Split at the top-level comma.
    int depth = 0;
    std::size_t comma = std::string::npos;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i] == '(') ++depth;
      if (points[i] == ')') --depth;
      if (points[i] == ',' && depth == 0) {
        comma = i;
        break;
      }
    }
    if (comma == std::string::npos) throw bad("expected 'a,b'");
    const cd a = parse_constant(points.substr(0, comma));
    const cd b = parse_constant(points.substr(comma + 1));
    const cd lam = parse_constant(text.substr(semi + 7));
    if (lam.imag() != 0.0) throw bad("multiplier must be real");
    return Automorphism::from_fixed_points(a, b, lam.real());
  }
  throw bad("expected 'canonical:r' or 'fixed:a,b;deriv:lambda_a'");
}

}  // namespace wcospec
