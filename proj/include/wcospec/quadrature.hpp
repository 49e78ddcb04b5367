#pragma once

#include <vector>

namespace wcospec {

// Gauss-Jacobi rule on (-1, 1) for the weight (1-t)^alpha (1+t)^beta,
// alpha, beta > -1, via the Golub-Welsch eigenproblem.
struct GaussRule {
  std::vector<double> nodes, weights;
};
GaussRule gauss_jacobi(int n, double alpha, double beta);

}  // namespace wcospec
