#include "cvwit/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "cvwit/errors.hpp"

namespace cvwit {

namespace {

constexpr double kRescale = 1e100;
const double kLogRescale = std::log(kRescale);

// Runs the normalized recurrence at one point, calling visit(n, mantissa, log_scale)
// with psi_n = mantissa * exp(log_scale).
template <class Visit>
void hermite_walk(double x, int count, Visit&& visit) {
  double log_scale = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
  double prev = 0.0;
  double cur = 1.0;
  for (int n = 0; n < count; ++n) {
    visit(n, cur, log_scale);
    const double next = std::sqrt(2.0 / (n + 1)) * x * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += kLogRescale;
    }
  }
}

}  // namespace

Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& x, int count) {
  if (count < 1) throw PreconditionError("hermite_functions: count must be positive");
  Eigen::MatrixXd out(x.size(), count);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    hermite_walk(x(i), count, [&](int n, double m, double ls) { out(i, n) = m * std::exp(ls); });
  }
  return out;
}

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1) throw PreconditionError("gauss_hermite: order must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(std::max(order - 1, 0));
  for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw InvariantError("gauss_hermite: eigensolver failed");

  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  // Exact symmetry: average mirrored nodes.
  for (int i = 0; i < order / 2; ++i) {
    const double s = 0.5 * (rule.nodes(order - 1 - i) - rule.nodes(i));
    rule.nodes(i) = -s;
    rule.nodes(order - 1 - i) = s;
  }
  if (order % 2 == 1) rule.nodes(order / 2) = 0.0;

  rule.weights.resize(order);
  rule.scaled_weights.resize(order);
  for (int i = 0; i < order; ++i) {
    const double x = rule.nodes(i);
    // sum_k psi_k^2 kept as sum * exp(2 * log_scale) with the running exponent.
    double sum = 0.0;
    double sum_scale = 0.0;
    bool started = false;
    hermite_walk(x, order, [&](int, double m, double ls) {
      if (!started) {
        sum_scale = ls;
        started = true;
      }
      if (ls != sum_scale) {
        sum *= std::exp(2.0 * (sum_scale - ls));
        sum_scale = ls;
      }
      sum += m * m;
    });
    // scaled weight = 1 / (sum * e^{2 s}); weight = scaled * e^{-x^2}
    const double log_scaled = -std::log(sum) - 2.0 * sum_scale;
    rule.scaled_weights(i) = std::exp(log_scaled);
    rule.weights(i) = std::exp(log_scaled - x * x);
  }
  return rule;
}

}  // namespace cvwit
