#include "wcospec/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "wcospec/error.hpp"

namespace wcospec {

GaussRule gauss_jacobi(int n, double a, double b) {
  if (n < 1 || !(a > -1.0) || !(b > -1.0))
    throw Error(ErrorKind::InvalidArgument, "gauss_jacobi: need n >= 1 and exponents > -1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    // Diagonal; the k = 0 case of the general formula is 0/0 when a + b = 0.
    J(k, k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double k1 = k + 1.0;
      const double s1 = 2.0 * k1 + a + b;
      // For k = 0 the factor (1 + a + b) cancels; keep it out to avoid 0/0.
      const double ratio =
          k == 0 ? 4.0 * (1.0 + a) * (1.0 + b) / (s1 * s1 * (s1 + 1.0))
                 : 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
      const double off = std::sqrt(ratio);
      J(k, k + 1) = off;
      J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::EigSolverFailure, "Golub-Welsch eigensolve failed");
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(a + b + 2.0));
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v * v;
  }
  return rule;
}

}  // namespace wcospec
