#pragma once

// Gauss-Hermite rules and normalized Hermite functions.

#include <Eigen/Dense>

namespace cvwit {

/// Rule for integrals of the form int e^{-x^2} f(x) dx ~ sum_i weights_i f(nodes_i).
/// scaled_weights_i = weights_i * e^{nodes_i^2}, for integrating f directly.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd scaled_weights;
};

/// Nodes from the symmetric Jacobi matrix; weights from the Christoffel
/// function 1 / sum_k psi_k(x)^2, which stays finite where e^{-x^2} underflows.
GaussHermiteRule gauss_hermite(int order);

/// psi_n(x_i) for n < count, as a (points x count) matrix. The recurrence runs
/// with a running exponent so large |x| does not underflow before it matters.
Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& x, int count);

}  // namespace cvwit
