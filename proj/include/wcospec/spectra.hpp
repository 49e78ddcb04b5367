#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wcospec/orbit_grid.hpp"
#include "wcospec/wco.hpp"

namespace wcospec {

struct AnnulusPrediction {
  double outer_upper = 0.0;      // max{A+/psi'(a)^g, B+/psi'(b)^g}
  double inner_lower = 0.0;      // min{A-/psi'(a)^g, B-/psi'(b)^g}
  double inclusion_inner = 0.0;  // B+/psi'(b)^g
  double inclusion_outer = 0.0;  // A-/psi'(a)^g
  bool universality_window_nonempty = false;
  double gamma = 0.0;
  double deriv_a = 0.0, deriv_b = 0.0;
  double A_plus = 0.0, A_minus = 0.0, B_plus = 0.0, B_minus = 0.0;

  bool in_window(cd lambda) const {
    return inclusion_inner < std::abs(lambda) && std::abs(lambda) < inclusion_outer;
  }
};

AnnulusPrediction predict_annuli(const WeightSymbol& u, const Automorphism& psi, const SpaceSpec& space);
AnnulusPrediction predict_annuli(const WCOperator& T);

struct GelfandSequence {
  std::vector<double> values;  // ||T^n f||^{1/n}, n = 1..n_max
  // Entries whose iterate lost more than the tail threshold past N.
  std::vector<bool> truncation_suspect;
  std::string method;
};

// ||T^n f||^{1/n} for a polynomial probe f. Exact iterates on the orbit grid
// when the symbol is hyperbolic, finite-section iterates otherwise.
GelfandSequence gelfand_radius(const WCOperator& T, const TaylorSeries& f, int n_max);
// Finite-section iterates (diagnostic; loses the mass pushed past N).
GelfandSequence gelfand_radius_finite_section(const WCOperator& T, const TaylorSeries& f, int n_max);

struct ExactGelfandOptions {
  double probe_fraction = 0.98;  // probe (a-z)^-s (b-z)^-s with s = fraction * gamma
  int steps_per_shift = 16;
  int bergman_lines = 48;
  double max_window = 4000.0;
};
// Exact iterates on the orbit grid, in log space.
GelfandSequence gelfand_radius_exact(const WCOperator& T, int n_max, const ExactGelfandOptions& opt = {});

// ||M^n||_2^{1/n}, n = 1..n_max (secondary diagnostic).
std::vector<double> operator_norm_sequence(const Eigen::MatrixXcd& M, int n_max);

// Eigenvalues of a finite section. Diagnostic only: finite sections of
// non-normal operators pollute the spectrum.
std::vector<cd> truncated_eigenvalues(const Eigen::MatrixXcd& M);

struct ResolventResult {
  TaylorSeries partial_sum;     // finite-section partial sum
  int terms = 0;
  // Relative residual ||(lambda - T) x - f|| / ||f|| with the exact operator on
  // the orbit grid, after each number of terms; empty without a hyperbolic symbol.
  std::vector<double> residual_history;
  double residual = 0.0;        // last exact residual (finite-section one if no grid)
  double finite_section_residual = 0.0;
  double rate = 0.0;            // geometric rate of the term norms
  bool slow_convergence = false;
  double margin = 0.0;          // distance of |lambda| from the validity bound, relative
};

// F = sum_{n<M} T^n f / lambda^{n+1}; (lambda - T) F = f.
ResolventResult resolvent_forward(const WCOperator& T, const FactoredFunction& f, cd lambda, int M);
ResolventResult resolvent_forward(const WCOperator& T, const TaylorSeries& f, cd lambda, int M);
// G = -sum_{n<M} lambda^n T^{-(n+1)} f; (lambda - T) G = f.
ResolventResult resolvent_backward(const WCOperator& T, const FactoredFunction& f, cd lambda, int M);
ResolventResult resolvent_backward(const WCOperator& T, const TaylorSeries& f, cd lambda, int M);

inline constexpr double kSlowConvergenceRate = 0.8;
inline constexpr int kDivergenceRun = 5;

// f = (a-z)^{alpha-gamma} (b-z)^{beta-gamma} with alpha, beta past the
// thresholds of the inclusion argument plus a margin, rounded up to integers.
FactoredFunction inclusion_test_function(const WCOperator& T, double margin = 0.5);

}  // namespace wcospec
