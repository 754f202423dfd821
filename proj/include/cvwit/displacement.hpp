#pragma once

// Displacements through one spectral decomposition of the generator.
//
// With H = -i(a^dag - a), D(r) = exp(i r H) for real r, and a phase rotation
// R = diag(e^{i theta n}) turns it into D(r e^{i theta}) = R D(r) R^dag.
// This is the same truncated exponential as displacement_op, just cheaper to
// evaluate for many alphas.

#include "cvwit/fock.hpp"

namespace cvwit {

class DisplacementGenerator {
 public:
  explicit DisplacementGenerator(FockCutoff cutoff);

  FockCutoff cutoff() const noexcept { return cutoff_; }
  /// Eigenvectors V and eigenvalues lambda of H.
  const Matrix& basis() const noexcept { return v_; }
  const RealVector& spectrum() const noexcept { return lambda_; }

  /// Coherent-state tail mass at |alpha|^2; throws TruncationError above guard.
  double check(Complex alpha, double guard = kDisplacementGuard) const;

  Matrix displacement(Complex alpha, double guard = kDisplacementGuard) const;

  /// D(alpha) |v>.
  Vector apply(Complex alpha, const Vector& v, double guard = kDisplacementGuard) const;

  /// diag(e^{i theta n}) as a vector.
  Vector rotation(double theta) const;

 private:
  FockCutoff cutoff_;
  Matrix v_;
  RealVector lambda_;
};

}  // namespace cvwit
