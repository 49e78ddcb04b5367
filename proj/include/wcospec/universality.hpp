#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wcospec/orbit_grid.hpp"
#include "wcospec/spectra.hpp"
#include "wcospec/wco.hpp"

namespace wcospec {

// (a - z)^mu (b - z)^nu
struct OmegaWeight {
  double mu = 0.0, nu = 0.0;
  cd a{}, b{};
  WeightExpr expr;
  TaylorSeries series;
};
OmegaWeight omega_weight(const Automorphism& psi, double mu, double nu, std::size_t order);

// Branch of log((b - z)/(a - z)): continuous on the disk, equal to Log(b/a) at 0.
WeightExpr strip_log_expr(const Automorphism& psi);
// ((b - z)/(a - z))^w
WeightExpr eigenfunction_expr(const Automorphism& psi, cd w);
TaylorSeries eigenfunction(const Automorphism& psi, cd w, std::size_t order);
// Exponent of g_k: 2 pi i k / delta.
cd gk_exponent(const Automorphism& psi, long k);
std::vector<TaylorSeries> gk_family(const Automorphism& psi, long K, std::size_t order);

// Residual of C_psi g_k = g_k on indices <= band, relative to the largest
// coefficient of g_k. The composition is expanded from the closed form.
struct EigenRelation {
  double exact = 0.0;          // closed-form composition
  double finite_section = 0.0; // truncated g_k pushed through the finite section
  std::size_t band = 0, finite_section_band = 0;
};
EigenRelation gk_eigen_relation(const Automorphism& psi, long k, std::size_t order);

// ||omega_{1,1} g_k' - (2 pi k (b - a) i / delta) g_k|| on indices <= order/2,
// relative to the same norm of g_k.
double generator_check(const Automorphism& psi, long k, std::size_t order);
cd generator_eigenvalue(const Automorphism& psi, long k);

struct KernelProbe {
  long K = 0;
  int gram_rank = 0;
  double min_singular_value = 0.0;         // of the unit-normalized Gram, relative to the largest
  std::vector<double> singular_values;      // 2K+1 values
  std::vector<double> augmented_singular_values;  // with the control vector
  double control_gap = 0.0;                 // sigma_{2K+1} / sigma_{2K+2} of the augmented Gram
  std::vector<double> eigenvector_residuals;  // ||T f_k - lambda f_k|| / ||f_k||
  std::string construction;                 // "product" or "inverse_iteration"
  double base_exponent_re = 0.0, base_exponent_im = 0.0;
};
inline constexpr double kRankThreshold = 1e-8;
// NoEigenvectorFound if lambda is outside the universality window or no
// eigenvector is found.
KernelProbe kernel_probe(const WCOperator& T, cd lambda, long K);

struct TargetResidual {
  double residual = 0.0;
  std::string method;  // "neumann_forward", "neumann_backward", "split", "galerkin_lsq"
  int terms = 0;
};
struct SurjectivityProbe {
  double max_residual = 0.0;
  std::vector<TargetResidual> per_target;
  int split_m = 0, split_n = 0;
  bool success = true;
};
// Inside the annulus the target is split as in the decomposition lemma and
// each part is summed on the orbit grid; outside it a plain Neumann series is
// used. ProbeFailed (with the best residual) when a target misses `tolerance`,
// unless throw_on_failure is false.
SurjectivityProbe surjectivity_probe(const WCOperator& T, cd lambda, const std::vector<TaylorSeries>& targets,
                                     double tolerance = 1e-3, bool throw_on_failure = true);

struct RatioLimits {
  double at_a = 0.0, at_b = 0.0;
  cd value_a{}, value_b{};
};
RatioLimits omega_ratio_limits(const Automorphism& psi, double mu, double nu);
// omega(psi(z))/omega(z), in closed form, normalized to the branch of omega.
WeightExpr omega_ratio_expr(const Automorphism& psi, double mu, double nu);
WeightSymbol twisted_weight(const WeightSymbol& u, const Automorphism& psi, double mu, double nu,
                            std::size_t order);

struct Decomposition {
  int m = 0, n = 0;
  // f1 = (a - z)^m q1, f2 = (b - z)^n q2
  FactoredFunction part1, part2;
  TaylorSeries f1, f2;
  // Tail diagnostics of f1/omega_{mu,0} and f2/omega_{0,nu}.
  NormResult quotient1, quotient2;
};
Decomposition decompose(const TaylorSeries& f, const Automorphism& psi, double mu, double nu,
                        const SpaceSpec& space = SpaceSpec::hardy());

enum class Verdict { CertifiedAtScale, WindowEmpty, Failed };
const char* to_string(Verdict v);

struct UniversalityReport {
  AnnulusPrediction annulus;
  bool window_check = false;
  std::optional<KernelProbe> kernel;
  std::optional<SurjectivityProbe> surjectivity;
  int num_targets = 0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  Verdict verdict = Verdict::Failed;
  std::vector<std::string> diagnostics;
};
inline constexpr std::uint64_t kDefaultSeed = 20240611;
// Battery: monomials z^0..z^8 plus three seeded random polynomials of degree 8.
std::vector<TaylorSeries> default_targets(std::size_t order, std::uint64_t seed = kDefaultSeed);
UniversalityReport caradus_report(const WCOperator& T, cd lambda, long K, double tolerance,
                                  std::uint64_t seed = kDefaultSeed);

}  // namespace wcospec
