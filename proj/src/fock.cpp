#include "cvwit/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "cvwit/errors.hpp"

namespace cvwit {

FockCutoff::FockCutoff(int dim) : dim_(dim) {
  if (dim < 2) throw PreconditionError("cutoff dimension must be >= 2, got " + std::to_string(dim));
}

void require_same(FockCutoff a, FockCutoff b, std::string_view what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": cutoff mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
}

namespace {

int checked_dim(Eigen::Index n) {
  if (n < 2) throw PreconditionError("state vector needs at least two Fock levels");
  return static_cast<int>(n);
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------- PureState

PureState::PureState(Vector amplitudes, double leakage)
    : amps_(std::move(amplitudes)), cutoff_(checked_dim(amps_.size())), leakage_(leakage) {
  const double norm = amps_.norm();
  if (!(norm > 1e-300) || !std::isfinite(norm)) throw PreconditionError("cannot normalize a zero state vector");
  amps_ /= norm;
}

double PureState::tail_mass(int k) const {
  if (k >= dim()) return 0.0;
  k = std::max(k, 0);
  return amps_.tail(dim() - k).squaredNorm();
}

double PureState::expectation(const Matrix& op) const {
  if (op.rows() != dim() || op.cols() != dim()) throw DimensionError("operator/state dimension mismatch");
  return amps_.dot(op * amps_).real();
}

DensityMatrix PureState::density() const { return DensityMatrix(amps_ * amps_.adjoint(), leakage_); }

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(const Matrix& m, double leakage)
    : m_(m), cutoff_(static_cast<int>(m.rows())), leakage_(leakage) {
  if (m.rows() != m.cols()) throw DimensionError("density matrix must be square");
  m_ = 0.5 * (m + m.adjoint());
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw InvariantError("density matrix trace " + std::to_string(tr) + " deviates from 1");
  }
  const double lo = min_eigenvalue();
  if (lo < -kPositivityTol) {
    throw InvariantError("density matrix has eigenvalue " + std::to_string(lo));
  }
}

double DensityMatrix::expectation(const Matrix& op) const {
  if (op.rows() != dim() || op.cols() != dim()) throw DimensionError("operator/state dimension mismatch");
  // Tr(A rho) = sum_ij A_ij rho_ji
  return (op.cwiseProduct(m_.transpose())).sum().real();
}

double DensityMatrix::purity() const { return m_.cwiseAbs2().sum(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

DensityMatrix mix(double p, const DensityMatrix& a, const DensityMatrix& b) {
  require_same(a.cutoff(), b.cutoff(), "mix");
  if (p < 0.0 || p > 1.0) throw PreconditionError("mixing weight outside [0,1]");
  return DensityMatrix(p * a.matrix() + (1.0 - p) * b.matrix(), std::max(a.leakage(), b.leakage()));
}

// ----------------------------------------------------------- OperatorMatrix

OperatorMatrix::OperatorMatrix(Matrix m, bool hermitian, double norm_bound, double leakage)
    : m_(std::move(m)), hermitian_(hermitian), norm_bound_(norm_bound), leakage_(leakage) {
  if (m_.rows() != m_.cols()) throw DimensionError("operator must be square");
  if (!(norm_bound >= 0.0)) throw PreconditionError("norm bound must be nonnegative");
  if (hermitian_ && max_abs(m_ - m_.adjoint()) > kHermitianTol) {
    throw InvariantError("operator flagged Hermitian is not");
  }
}

OperatorMatrix OperatorMatrix::hermitian(Matrix m) {
  Matrix h = 0.5 * (m + m.adjoint());
  if (max_abs(h - m) > kHermitianTol) throw InvariantError("operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double bound = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(h.rows() - 1)));
  return OperatorMatrix(std::move(h), true, bound);
}

OperatorMatrix OperatorMatrix::general(Matrix m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const double bound = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return OperatorMatrix(std::move(m), false, bound);
}

OperatorMatrix OperatorMatrix::scaled(double t) const {
  return OperatorMatrix(t * m_, hermitian_, std::abs(t) * norm_bound_, leakage_);
}

// ---------------------------------------------------------------- operators

LadderOps ladder_ops(FockCutoff cutoff) {
  const int d = cutoff.dim();
  Matrix a = Matrix::Zero(d, d);
  Matrix n = Matrix::Zero(d, d);
  for (int j = 1; j < d; ++j) a(j - 1, j) = std::sqrt(static_cast<double>(j));
  for (int j = 0; j < d; ++j) n(j, j) = j;
  const double top = std::sqrt(static_cast<double>(d - 1));
  Matrix adag = a.adjoint();
  return {OperatorMatrix(std::move(a), false, top), OperatorMatrix(std::move(adag), false, top),
          OperatorMatrix(std::move(n), true, d - 1.0)};
}

OperatorMatrix parity_op(FockCutoff cutoff) {
  const int d = cutoff.dim();
  Matrix p = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) p(j, j) = (j % 2 == 0) ? 1.0 : -1.0;
  return OperatorMatrix(std::move(p), true, 1.0);
}

OperatorMatrix quadrature_q(FockCutoff cutoff) {
  const auto ops = ladder_ops(cutoff);
  return OperatorMatrix::hermitian((ops.a.matrix() + ops.adag.matrix()) / std::sqrt(2.0));
}

OperatorMatrix quadrature_p(FockCutoff cutoff) {
  const auto ops = ladder_ops(cutoff);
  return OperatorMatrix::hermitian(Complex(0, -1) * (ops.a.matrix() - ops.adag.matrix()) / std::sqrt(2.0));
}

double coherent_tail(double mean, int dim) {
  if (mean <= 0.0) return 0.0;
  // Sum the Poisson pmf from dim upward in log space until terms are negligible.
  double log_term = -mean + dim * std::log(mean) - std::lgamma(dim + 1.0);
  double total = 0.0;
  for (int k = dim; k < dim + 10000; ++k) {
    const double t = std::exp(log_term);
    total += t;
    if (k > mean && t < 1e-18 * std::max(total, 1e-300)) break;
    log_term += std::log(mean) - std::log(k + 1.0);
  }
  return std::min(total, 1.0);
}

Matrix expm(const Matrix& x) { return x.exp(); }

OperatorMatrix displacement_op(Complex alpha, FockCutoff cutoff, double guard) {
  const double tail = coherent_tail(std::norm(alpha), cutoff.dim());
  if (tail > guard) {
    throw TruncationError("displacement |alpha|=" + std::to_string(std::abs(alpha)) + " leaks " +
                          std::to_string(tail) + " above cutoff " + std::to_string(cutoff.dim()));
  }
  const auto ops = ladder_ops(cutoff);
  Matrix gen = alpha * ops.adag.matrix() - std::conj(alpha) * ops.a.matrix();
  return OperatorMatrix(expm(gen), false, 1.0, tail);
}

OperatorMatrix squeeze_op(Complex xi, FockCutoff cutoff) {
  const auto ops = ladder_ops(cutoff);
  const Matrix a2 = ops.a.matrix() * ops.a.matrix();
  Matrix gen = 0.5 * (std::conj(xi) * a2 - xi * a2.adjoint());
  return OperatorMatrix(expm(gen), false, 1.0);
}

double unitarity_defect(const Matrix& u) {
  return max_abs(u * u.adjoint() - Matrix::Identity(u.rows(), u.cols()));
}

HermitianEigen eigh(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw InvariantError("Hermitian eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  require_same(a.cutoff(), b.cutoff(), "fidelity");
  const auto ea = eigh(a.matrix());
  const RealVector sq = ea.values.cwiseMax(0.0).cwiseSqrt();
  const Matrix root = ea.vectors * sq.asDiagonal() * ea.vectors.adjoint();
  const Matrix inner = root * b.matrix() * root;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(s * s, 0.0, 1.0);
}

double fidelity(const PureState& a, const DensityMatrix& b) {
  require_same(a.cutoff(), b.cutoff(), "fidelity");
  return std::clamp(b.expectation(Matrix(a.amplitudes() * a.amplitudes().adjoint())), 0.0, 1.0);
}

double trace_norm(const Matrix& x) {
  if (x.rows() == x.cols() && max_abs(x - x.adjoint()) <= kHermitianTol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Matrix> svd(x);
  return svd.singularValues().sum();
}

double trace_norm(const OperatorMatrix& x) { return trace_norm(x.matrix()); }

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

namespace {
void check_budget(Eigen::Index da, Eigen::Index db, std::size_t budget) {
  const auto prod = static_cast<std::size_t>(da) * static_cast<std::size_t>(db);
  if (prod > budget) {
    throw BudgetError("product dimension " + std::to_string(prod) + " exceeds budget " + std::to_string(budget));
  }
}
}  // namespace

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b, std::size_t budget) {
  check_budget(a.dim(), b.dim(), budget);
  return DensityMatrix(kron(a.matrix(), b.matrix()), a.leakage() + b.leakage());
}

OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b, std::size_t budget) {
  check_budget(a.dim(), b.dim(), budget);
  return OperatorMatrix(kron(a.matrix(), b.matrix()), a.is_hermitian() && b.is_hermitian(),
                        a.norm_bound() * b.norm_bound(), std::max(a.leakage(), b.leakage()));
}

}  // namespace cvwit
