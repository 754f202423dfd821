#pragma once

// CPTP maps on the truncated single mode, plus the two-mode pieces of one
// round of GKP error correction.

#include <string>
#include <vector>

#include "cvwit/displacement.hpp"
#include "cvwit/fock.hpp"

namespace cvwit {

class KrausChannel {
 public:
  KrausChannel(std::vector<OperatorMatrix> ops, std::string label);

  const std::vector<OperatorMatrix>& kraus_ops() const noexcept { return ops_; }
  const std::string& label() const noexcept { return label_; }

  /// max |(sum K^dag K - I)_ij|.
  double trace_defect() const;

  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  std::vector<OperatorMatrix> ops_;
  std::string label_;
};

struct LossParams {
  double eta = 1.0;  // transmissivity
};

/// K_k = sqrt((1-eta)^k / k!) eta^{n/2} a^k, k = 0..dim-1.
KrausChannel pure_loss(LossParams p, FockCutoff cutoff);

/// Same channel from the closed-form matrix elements, O(dim^3):
/// out_mn = sum_k sqrt(C(m+k,k) C(n+k,k)) eta^{(m+n)/2} (1-eta)^k rho_{m+k,n+k}.
DensityMatrix apply_loss(const DensityMatrix& rho, LossParams p);

struct GaussNoiseParams {
  double sigma2 = 0.01;  // added variance per quadrature
  int quad_order = 15;   // Gauss-Hermite nodes per quadrature
};

/// rho -> sum_j w_j D(xi_j) rho D(xi_j)^dag over a tensor Gauss-Hermite grid.
class GaussianNoiseChannel {
 public:
  GaussianNoiseChannel(GaussNoiseParams p, FockCutoff cutoff, double guard = kDisplacementGuard);

  const GaussNoiseParams& params() const noexcept { return params_; }
  /// Weight-averaged coherent tail over the displacement nodes.
  double leakage() const noexcept { return leakage_; }
  const std::vector<Complex>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  GaussNoiseParams params_;
  FockCutoff cutoff_;
  std::vector<Complex> nodes_;
  std::vector<double> weights_;
  std::vector<Matrix> displacements_;
  double leakage_ = 0.0;
};

GaussianNoiseChannel gaussian_noise(GaussNoiseParams p, FockCutoff cutoff);

/// e^{-eps n} rho e^{-eps n}, renormalized.
DensityMatrix damping(const DensityMatrix& rho, double epsilon);
PureState damping(const PureState& psi, double epsilon);

/// exp(-i q (x) p) on two modes of the given cutoff; BudgetError if dim^2 > budget.
OperatorMatrix sum_gate(FockCutoff cutoff, std::size_t budget = kDefaultProductBudget);

enum class EcQuadrature { Q, P, Both };

/// Outcome-averaged Steane round. The data controls a sum gate onto an
/// ancilla (a finite-energy |+> codeword), the ancilla q is read out in the
/// eigenbasis of the truncated q operator, and the data is shifted back by
/// the residue of the outcome modulo sqrt(pi) (nearest lattice point, ties
/// toward zero). The p round conjugates the same map by a quarter rotation.
///
/// The two-mode state is never formed: exp(-i q (x) p) is block diagonal in
/// the data's q eigenbasis, so each outcome acts on the data as
/// K_j = sum_k <x_j| T(x_k) |anc> |x_k><x_k|.
DensityMatrix gkp_ec_round(const DensityMatrix& rho, const PureState& ancilla,
                           EcQuadrature which = EcQuadrature::Both);

/// The same round with the two-mode state built explicitly and the sum gate
/// taken as a dense matrix exponential. Only practical for small cutoffs;
/// throws BudgetError when dim^2 exceeds budget.
DensityMatrix gkp_ec_round_explicit(const DensityMatrix& rho, const PureState& ancilla,
                                    EcQuadrature which = EcQuadrature::Both,
                                    std::size_t budget = kDefaultProductBudget);

/// Throws PreconditionError unless the ancilla looks like a finite-energy |+>.
void validate_gkp_ancilla(const PureState& ancilla);

/// Residue of x modulo sqrt(pi) in [-sqrt(pi)/2, sqrt(pi)/2], ties toward zero.
double lattice_residue(double x);

}  // namespace cvwit
