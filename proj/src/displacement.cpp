#include "cvwit/displacement.hpp"

#include <cmath>
#include <string>

#include "cvwit/errors.hpp"

namespace cvwit {

DisplacementGenerator::DisplacementGenerator(FockCutoff cutoff) : cutoff_(cutoff) {
  const auto ops = ladder_ops(cutoff);
  const Matrix h = Complex(0, -1) * (ops.adag.matrix() - ops.a.matrix());
  auto eig = eigh(h);
  v_ = std::move(eig.vectors);
  lambda_ = std::move(eig.values);
}

double DisplacementGenerator::check(Complex alpha, double guard) const {
  const double tail = coherent_tail(std::norm(alpha), cutoff_.dim());
  if (tail > guard) {
    throw TruncationError("displacement |alpha|=" + std::to_string(std::abs(alpha)) + " leaks " +
                          std::to_string(tail) + " above cutoff " + std::to_string(cutoff_.dim()));
  }
  return tail;
}

Vector DisplacementGenerator::rotation(double theta) const {
  const int d = cutoff_.dim();
  Vector r(d);
  for (int n = 0; n < d; ++n) r(n) = std::polar(1.0, theta * n);
  return r;
}

Matrix DisplacementGenerator::displacement(Complex alpha, double guard) const {
  check(alpha, guard);
  const double r = std::abs(alpha);
  const double theta = std::arg(alpha);
  Vector phase(lambda_.size());
  for (Eigen::Index k = 0; k < lambda_.size(); ++k) phase(k) = std::polar(1.0, r * lambda_(k));
  Matrix d = v_ * phase.asDiagonal() * v_.adjoint();
  const Vector rot = rotation(theta);
  return rot.asDiagonal() * d * rot.conjugate().asDiagonal();
}

Vector DisplacementGenerator::apply(Complex alpha, const Vector& v, double guard) const {
  if (v.size() != cutoff_.dim()) throw DimensionError("displacement: vector size mismatch");
  check(alpha, guard);
  const double r = std::abs(alpha);
  const Vector rot = rotation(std::arg(alpha));
  Vector y = v_.adjoint() * rot.conjugate().cwiseProduct(v);
  for (Eigen::Index k = 0; k < y.size(); ++k) y(k) *= std::polar(1.0, r * lambda_(k));
  return rot.cwiseProduct(v_ * y);
}

}  // namespace cvwit
