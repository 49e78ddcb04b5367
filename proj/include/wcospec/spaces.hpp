#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wcospec/series.hpp"

namespace wcospec {

struct SpaceSpec {
  enum class Kind { Hardy, Bergman };
  Kind kind = Kind::Hardy;
  double sigma = 0.0;  // Bergman weight exponent, > -1
  double p = 2.0;

  static SpaceSpec hardy(double p = 2.0);
  static SpaceSpec bergman(double sigma, double p = 2.0);

  // Isometry exponent: 1/p (Hardy) or (sigma + 2)/p (Bergman).
  double gamma() const { return kind == Kind::Hardy ? 1.0 / p : (sigma + 2.0) / p; }
  bool is_hardy() const { return kind == Kind::Hardy; }
  // "hardy" or "bergman:<sigma>", with ";p=<p>" when p != 2.
  std::string to_string() const;
};

// "hardy" | "bergman:<sigma>"
SpaceSpec parse_space(std::string_view text, double p = 2.0);

// ||z^n||; Bergman uses Lebesgue area measure. UnsupportedExponent if p != 2.
double monomial_norm(const SpaceSpec& space, std::size_t n);
std::vector<double> monomial_norms(const SpaceSpec& space, std::size_t order);

struct NormResult {
  double value = 0.0;
  double tail_fraction = 0.0;  // share of ||f||^2 in the last 17 coefficients
  bool truncation_suspect = false;
};

inline constexpr double kTailThreshold = 1e-6;
inline constexpr std::size_t kTailWidth = 16;

NormResult norm_with_diagnostic(const TaylorSeries& f, const SpaceSpec& space);
double norm(const TaylorSeries& f, const SpaceSpec& space);
// <f, g> = sum f_k conj(g_k) ||z^k||^2
cd inner(const TaylorSeries& f, const TaylorSeries& g, const SpaceSpec& space);

// p-mean of f on |z| = rho (Hardy, dtheta/2pi, 8192-node trapezoid) or the
// p-th root of the weighted area integral over |z| <= rho (Bergman). rho = 1
// evaluates the stored polynomial on the boundary.
double pnorm_quadrature(const TaylorSeries& f, const SpaceSpec& space, double rho);

inline constexpr int kCircleNodes = 8192;

}  // namespace wcospec
