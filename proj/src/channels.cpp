#include "cvwit/channels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cvwit/errors.hpp"
#include "cvwit/quadrature.hpp"

namespace cvwit {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kTraceDefectTol = 1e-8;
}  // namespace

// ------------------------------------------------------------- KrausChannel

KrausChannel::KrausChannel(std::vector<OperatorMatrix> ops, std::string label)
    : ops_(std::move(ops)), label_(std::move(label)) {
  if (ops_.empty()) throw PreconditionError("Kraus channel needs at least one operator");
  const int d = ops_.front().dim();
  for (const auto& k : ops_) {
    if (k.dim() != d) throw DimensionError("Kraus operators of different dimension");
  }
  if (trace_defect() > kTraceDefectTol) {
    throw InvariantError("channel '" + label_ + "' is not trace preserving (defect " +
                         std::to_string(trace_defect()) + ")");
  }
}

double KrausChannel::trace_defect() const {
  const int d = ops_.front().dim();
  Matrix acc = Matrix::Zero(d, d);
  for (const auto& k : ops_) acc.noalias() += k.matrix().adjoint() * k.matrix();
  return (acc - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != ops_.front().dim()) throw DimensionError("channel '" + label_ + "': dimension mismatch");
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : ops_) out.noalias() += k.matrix() * rho.matrix() * k.matrix().adjoint();
  return DensityMatrix(out, rho.leakage());
}

// --------------------------------------------------------------------- loss

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw PreconditionError("transmissivity must lie in [0,1]");
}

// sqrt(C(m+k,k)) eta^{m/2} (1-eta)^{k/2}
double loss_factor(int m, int k, double eta) {
  if (eta == 1.0) return k == 0 ? 1.0 : 0.0;
  if (eta == 0.0) return m == 0 ? 1.0 : 0.0;
  const double log_binom = std::lgamma(m + k + 1.0) - std::lgamma(m + 1.0) - std::lgamma(k + 1.0);
  return std::exp(0.5 * log_binom + 0.5 * m * std::log(eta) + 0.5 * k * std::log1p(-eta));
}

}  // namespace

KrausChannel pure_loss(LossParams p, FockCutoff cutoff) {
  check_eta(p.eta);
  const int d = cutoff.dim();
  std::vector<OperatorMatrix> ops;
  ops.reserve(d);
  for (int k = 0; k < d; ++k) {
    // <m|K_k|m+k> = sqrt(C(m+k,k)) eta^{m/2} (1-eta)^{k/2}
    Matrix kk = Matrix::Zero(d, d);
    for (int m = 0; m + k < d; ++m) kk(m, m + k) = loss_factor(m, k, p.eta);
    ops.push_back(OperatorMatrix::general(std::move(kk)));
  }
  return KrausChannel(std::move(ops), "pure_loss(eta=" + std::to_string(p.eta) + ")");
}

DensityMatrix apply_loss(const DensityMatrix& rho, LossParams p) {
  check_eta(p.eta);
  const int d = rho.dim();
  const Matrix& r = rho.matrix();
  Matrix out = Matrix::Zero(d, d);
  Eigen::VectorXd f(d);
  for (int k = 0; k < d; ++k) {
    const int len = d - k;
    for (int m = 0; m < len; ++m) f(m) = loss_factor(m, k, p.eta);
    if (f.head(len).cwiseAbs().maxCoeff() == 0.0) continue;
    out.topLeftCorner(len, len).noalias() +=
        (f.head(len).asDiagonal() * r.bottomRightCorner(len, len) * f.head(len).asDiagonal());
  }
  return DensityMatrix(out, rho.leakage());
}

// ------------------------------------------------------------ Gaussian noise

GaussianNoiseChannel::GaussianNoiseChannel(GaussNoiseParams p, FockCutoff cutoff, double guard)
    : params_(p), cutoff_(cutoff) {
  if (!(p.sigma2 > 0.0)) throw PreconditionError("noise variance must be positive");
  if (p.quad_order < 1) throw PreconditionError("quadrature order must be positive");
  const auto rule = gauss_hermite(p.quad_order);
  const double scale = std::sqrt(2.0 * p.sigma2);
  const DisplacementGenerator gen(cutoff);
  for (int i = 0; i < p.quad_order; ++i) {
    for (int j = 0; j < p.quad_order; ++j) {
      const double w = rule.weights(i) * rule.weights(j) / std::numbers::pi;
      // A displacement alpha shifts q by sqrt(2) Re(alpha) and p by sqrt(2) Im(alpha).
      const Complex alpha(scale * rule.nodes(i) / std::sqrt(2.0), scale * rule.nodes(j) / std::sqrt(2.0));
      leakage_ += w * coherent_tail(std::norm(alpha), cutoff.dim());
      nodes_.push_back(alpha);
      weights_.push_back(w);
    }
  }
  if (leakage_ > guard) {
    throw TruncationError("Gaussian noise sigma2=" + std::to_string(p.sigma2) + " leaks " +
                          std::to_string(leakage_) + " above cutoff " + std::to_string(cutoff.dim()));
  }
  displacements_.reserve(nodes_.size());
  for (auto a : nodes_) displacements_.push_back(gen.displacement(a, 1.0));
}

DensityMatrix GaussianNoiseChannel::apply(const DensityMatrix& rho) const {
  require_same(rho.cutoff(), cutoff_, "gaussian_noise");
  const int d = rho.dim();
  Matrix out = Matrix::Zero(d, d);
  Matrix tmp(d, d);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    tmp.noalias() = displacements_[k] * rho.matrix();
    out.noalias() += weights_[k] * tmp * displacements_[k].adjoint();
  }
  out /= out.trace().real();
  return DensityMatrix(out, rho.leakage() + leakage_);
}

GaussianNoiseChannel gaussian_noise(GaussNoiseParams p, FockCutoff cutoff) { return GaussianNoiseChannel(p, cutoff); }

// ------------------------------------------------------------------ damping

namespace {
Eigen::VectorXd damping_diag(int d, double eps) {
  if (!(eps >= 0.0)) throw PreconditionError("damping epsilon must be nonnegative");
  Eigen::VectorXd v(d);
  for (int n = 0; n < d; ++n) v(n) = std::exp(-eps * n);
  return v;
}
}  // namespace

DensityMatrix damping(const DensityMatrix& rho, double epsilon) {
  const Eigen::VectorXd g = damping_diag(rho.dim(), epsilon);
  Matrix out = g.asDiagonal() * rho.matrix() * g.asDiagonal();
  const double tr = out.trace().real();
  if (!(tr > 1e-300)) throw PreconditionError("damping produced a zero-trace operator");
  return DensityMatrix(out / tr, rho.leakage());
}

PureState damping(const PureState& psi, double epsilon) {
  const Eigen::VectorXd g = damping_diag(psi.dim(), epsilon);
  return PureState(g.cast<Complex>().cwiseProduct(psi.amplitudes()), psi.leakage());
}

// ------------------------------------------------------------ two-mode gate

OperatorMatrix sum_gate(FockCutoff cutoff, std::size_t budget) {
  const auto d = static_cast<std::size_t>(cutoff.dim());
  if (d * d > budget) {
    throw BudgetError("sum gate needs dimension " + std::to_string(d * d) + " above budget " + std::to_string(budget));
  }
  const Matrix gen = Complex(0, -1) * kron(quadrature_q(cutoff).matrix(), quadrature_p(cutoff).matrix());
  return OperatorMatrix(expm(gen), false, 1.0);
}

// ------------------------------------------------------------ GKP EC round

double lattice_residue(double x) {
  const double t = x / kSqrtPi;
  const double n = std::copysign(std::ceil(std::abs(t) - 0.5), t);
  return x - n * kSqrtPi;
}

void validate_gkp_ancilla(const PureState& anc) {
  const Vector& a = anc.amplitudes();
  double odd = 0.0;
  double imag = 0.0;
  for (int n = 0; n < anc.dim(); ++n) {
    if (n % 2 == 1) odd = std::max(odd, std::abs(a(n)));
    imag = std::max(imag, std::abs(a(n).imag()));
  }
  if (odd > 1e-9 || imag > 1e-9) {
    throw PreconditionError("EC ancilla is not a real, even-parity codeword");
  }
  // The |+> stabilizer shift by sqrt(pi) in q must have a large positive mean.
  const DisplacementGenerator gen(anc.cutoff());
  const Vector shifted = gen.apply(Complex(kSqrtPi / std::sqrt(2.0), 0.0), a, 1.0);
  const double stab = a.dot(shifted).real();
  if (stab < 0.4) {
    throw PreconditionError("EC ancilla fails the |+> stabilizer check (<T(sqrt pi)> = " + std::to_string(stab) + ")");
  }
}

namespace {

// Fixed data for one truncated cutoff: q = V diag(x) V^dag and p = W diag(x) W^dag
// with W = diag(i^n) V, so both quadratures share the spectrum x.
struct QuadratureFrames {
  RealVector x;
  Matrix v;
  Matrix w;
  Matrix g;  // W^dag V

  explicit QuadratureFrames(FockCutoff cutoff) {
    auto e = eigh(quadrature_q(cutoff).matrix());
    x = std::move(e.values);
    v = std::move(e.vectors);
    const int d = cutoff.dim();
    Vector ipow(d);
    for (int n = 0; n < d; ++n) ipow(n) = std::polar(1.0, 0.5 * std::numbers::pi * n);
    w = ipow.asDiagonal() * v;
    g = w.adjoint() * v;
  }
};

constexpr double kLowRankTol = 1e-15;

Matrix q_round(const Matrix& rho, const Vector& anc, const QuadratureFrames& f) {
  const int d = static_cast<int>(rho.rows());
  // coeff(j, k) = <x_j| exp(-i x_k p) |anc>
  const Vector wa = f.w.adjoint() * anc;
  Matrix shifted(d, d);
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < d; ++m) shifted(m, k) = std::polar(1.0, -f.x(m) * f.x(k)) * wa(m);
  const Matrix coeff = f.g.adjoint() * shifted;

  const Matrix rt = f.v.adjoint() * rho * f.v;
  auto es = eigh(0.5 * (rt + rt.adjoint()));
  const double top = std::max(es.values.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<int> keep;
  for (int i = 0; i < d; ++i)
    if (es.values(i) > kLowRankTol * top) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  const bool low_rank = 2 * r < d;
  Matrix factor;
  if (low_rank) {
    factor.resize(d, r);
    for (int i = 0; i < r; ++i) factor.col(i) = std::sqrt(es.values(keep[i])) * es.vectors.col(keep[i]);
  }

  Matrix acc = Matrix::Zero(d, d);
  Matrix y(d, d);
  Vector ph(d);
  for (int j = 0; j < d; ++j) {
    const Vector cj = coeff.row(j).transpose();
    if (low_rank) {
      const Matrix z = f.g * (cj.asDiagonal() * factor);
      y.noalias() = z * z.adjoint();
    } else {
      const Matrix xj = cj.asDiagonal() * rt * cj.conjugate().asDiagonal();
      y.noalias() = f.g * xj * f.g.adjoint();
    }
    const double res = lattice_residue(f.x(j));
    // Shifting q back by the residue is exp(+i res p), diagonal in the p frame.
    for (int m = 0; m < d; ++m) ph(m) = std::polar(1.0, res * f.x(m));
    acc += ph.asDiagonal() * y * ph.conjugate().asDiagonal();
  }
  return f.w * acc * f.w.adjoint();
}

Matrix q_round_explicit(const Matrix& rho, const Vector& anc, const QuadratureFrames& f, const Matrix& gate) {
  const int d = static_cast<int>(rho.rows());
  const Matrix joint = gate * kron(rho, anc * anc.adjoint()) * gate.adjoint();
  Matrix acc = Matrix::Zero(d, d);
  Matrix block(d, d);
  Vector ph(d);
  for (int j = 0; j < d; ++j) {
    const Vector xj = f.v.col(j);
    // (I (x) <x_j|) joint (I (x) |x_j>)
    for (int i = 0; i < d; ++i)
      for (int i2 = 0; i2 < d; ++i2)
        block(i, i2) = xj.dot(joint.block(i * d, i2 * d, d, d) * xj);
    const double res = lattice_residue(f.x(j));
    for (int m = 0; m < d; ++m) ph(m) = std::polar(1.0, res * f.x(m));
    const Matrix shift = f.w * ph.asDiagonal() * f.w.adjoint();
    acc += shift * block * shift.adjoint();
  }
  return acc;
}

template <class Round>
Matrix both_rounds(const Matrix& rho, EcQuadrature which, Round&& round) {
  const int d = static_cast<int>(rho.rows());
  Matrix m = rho;
  if (which != EcQuadrature::P) m = round(m);
  if (which != EcQuadrature::Q) {
    // U^dag rho U with U = exp(i pi n / 2) maps p readout onto q readout.
    Vector u(d);
    for (int n = 0; n < d; ++n) u(n) = std::polar(1.0, 0.5 * std::numbers::pi * n);
    m = u.conjugate().asDiagonal() * m * u.asDiagonal();
    m = round(m);
    m = u.asDiagonal() * m * u.conjugate().asDiagonal();
  }
  return m;
}

}  // namespace

DensityMatrix gkp_ec_round_explicit(const DensityMatrix& rho, const PureState& ancilla, EcQuadrature which,
                                    std::size_t budget) {
  require_same(rho.cutoff(), ancilla.cutoff(), "gkp_ec_round_explicit");
  validate_gkp_ancilla(ancilla);
  const Matrix gate = sum_gate(rho.cutoff(), budget).matrix();
  const QuadratureFrames frames(rho.cutoff());
  const Matrix m = both_rounds(rho.matrix(), which,
                               [&](const Matrix& x) { return q_round_explicit(x, ancilla.amplitudes(), frames, gate); });
  return DensityMatrix(m, rho.leakage() + ancilla.leakage());
}

DensityMatrix gkp_ec_round(const DensityMatrix& rho, const PureState& ancilla, EcQuadrature which) {
  require_same(rho.cutoff(), ancilla.cutoff(), "gkp_ec_round");
  validate_gkp_ancilla(ancilla);
  const QuadratureFrames frames(rho.cutoff());
  const Matrix m =
      both_rounds(rho.matrix(), which, [&](const Matrix& x) { return q_round(x, ancilla.amplitudes(), frames); });
  return DensityMatrix(m, rho.leakage() + ancilla.leakage());
}

}  // namespace cvwit
