#pragma once

// Truncated Fock-space linear algebra: cutoffs, states, operators, norms.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cvwit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPositivityTol = 1e-9;
inline constexpr double kNormTol = 1e-10;
/// Largest coherent-state tail mass above the cutoff accepted by displacements.
inline constexpr double kDisplacementGuard = 1e-8;
/// Largest product-space dimension materialized by tensor products.
inline constexpr std::size_t kDefaultProductBudget = 4096;

/// Number of retained Fock levels 0..dim-1 (or total dimension of a product space).
class FockCutoff {
 public:
  explicit FockCutoff(int dim);

  int dim() const noexcept { return dim_; }

  friend bool operator==(FockCutoff, FockCutoff) = default;

 private:
  int dim_;
};

/// Throws DimensionError unless both cutoffs agree.
void require_same(FockCutoff a, FockCutoff b, std::string_view what);

class DensityMatrix;

/// Normalized state vector in the truncated Fock basis.
class PureState {
 public:
  /// Normalizes the amplitudes. Throws PreconditionError on a zero vector.
  explicit PureState(Vector amplitudes, double leakage = 0.0);

  const Vector& amplitudes() const noexcept { return amps_; }
  FockCutoff cutoff() const noexcept { return cutoff_; }
  int dim() const noexcept { return cutoff_.dim(); }
  Complex operator[](int n) const { return amps_(n); }

  /// Upper bound on probability lost above the cutoff during construction.
  double leakage() const noexcept { return leakage_; }

  /// Sum of |a_j|^2 over j >= k.
  double tail_mass(int k) const;

  /// Re <psi|A|psi>.
  double expectation(const Matrix& op) const;

  DensityMatrix density() const;

 private:
  Vector amps_;
  FockCutoff cutoff_;
  double leakage_;
};

/// Trace-one positive Hermitian matrix. Construction symmetrizes once and
/// rejects inputs violating the trace or positivity tolerances.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& m, double leakage = 0.0);

  const Matrix& matrix() const noexcept { return m_; }
  FockCutoff cutoff() const noexcept { return cutoff_; }
  int dim() const noexcept { return cutoff_.dim(); }
  double leakage() const noexcept { return leakage_; }

  /// Re Tr(A rho).
  double expectation(const Matrix& op) const;
  double purity() const;
  double min_eigenvalue() const;

 private:
  Matrix m_;
  FockCutoff cutoff_;
  double leakage_;
};

/// p*a + (1-p)*b.
DensityMatrix mix(double p, const DensityMatrix& a, const DensityMatrix& b);

/// Bounded operator with a certified upper bound on its spectral norm.
class OperatorMatrix {
 public:
  OperatorMatrix(Matrix m, bool hermitian, double norm_bound, double leakage = 0.0);

  /// Hermitian operator whose norm bound comes from an eigensolve.
  static OperatorMatrix hermitian(Matrix m);
  /// General operator whose norm bound is its largest singular value.
  static OperatorMatrix general(Matrix m);

  const Matrix& matrix() const noexcept { return m_; }
  bool is_hermitian() const noexcept { return hermitian_; }
  double norm_bound() const noexcept { return norm_bound_; }
  double leakage() const noexcept { return leakage_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }

  OperatorMatrix scaled(double t) const;

 private:
  Matrix m_;
  bool hermitian_;
  double norm_bound_;
  double leakage_;
};

struct LadderOps {
  OperatorMatrix a;
  OperatorMatrix adag;
  OperatorMatrix n;
};

/// Truncated annihilation/creation/number operators. [a, a^dag] = I holds
/// only on the leading (dim-1) block.
LadderOps ladder_ops(FockCutoff cutoff);
OperatorMatrix parity_op(FockCutoff cutoff);
/// q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)), so [q, p] = i.
OperatorMatrix quadrature_q(FockCutoff cutoff);
OperatorMatrix quadrature_p(FockCutoff cutoff);

/// P(N >= dim) for N ~ Poisson(mean): the mass a coherent state with
/// |alpha|^2 = mean places above the cutoff.
double coherent_tail(double mean, int dim);

/// D(alpha) = exp(alpha a^dag - conj(alpha) a) on the truncated space.
/// Throws TruncationError when coherent_tail(|alpha|^2, dim) exceeds guard.
OperatorMatrix displacement_op(Complex alpha, FockCutoff cutoff, double guard = kDisplacementGuard);

/// S(xi) = exp((conj(xi) a^2 - xi a^dag^2)/2) on the truncated space.
OperatorMatrix squeeze_op(Complex xi, FockCutoff cutoff);

/// Dense matrix exponential (Pade approximant with scaling and squaring).
Matrix expm(const Matrix& x);

/// max |(U U^dag - I)_ij|.
double unitarity_defect(const Matrix& u);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
/// <psi|b|psi>.
double fidelity(const PureState& a, const DensityMatrix& b);

/// Schatten-1 norm.
double trace_norm(const Matrix& x);
double trace_norm(const OperatorMatrix& x);

Matrix kron(const Matrix& a, const Matrix& b);

/// Kronecker products. Throw BudgetError when the product dimension exceeds budget.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b,
                     std::size_t budget = kDefaultProductBudget);
OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b,
                      std::size_t budget = kDefaultProductBudget);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};
HermitianEigen eigh(const Matrix& h);

}  // namespace cvwit
