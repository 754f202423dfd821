#pragma once

// Witness families, their expectation values, box rescaling, and the
// Gaussian-fidelity optimizer.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cvwit/fock.hpp"
#include "cvwit/nelder_mead.hpp"
#include "cvwit/states.hpp"

namespace cvwit {

/// Operator interval -n I <= W <= m I.
struct WitnessBox {
  double n = 1.0;
  double m = 1.0;

  void validate() const;
  double min_side() const { return n < m ? n : m; }
};

enum class FreeSet { WignerPositive, ConvexGaussianHull, GaussianTwoCopy };

std::string_view to_string(FreeSet f);
FreeSet parse_free_set(std::string_view s);

/// Pi(alpha) = D(alpha) Pi D(alpha)^dag.
struct DisplacedParity {
  Complex alpha{0.0, 0.0};
};

/// Lambda I - |psi><psi|, with Lambda the Gaussian fidelity of psi.
struct PureProjector {
  PureState psi;
  std::optional<double> lambda;
};

/// Lambda^2 I - |psi><psi| (x) |psi><psi| on two copies.
struct TwoCopyProjector {
  PureState psi;
  std::optional<double> lambda;
};

/// Caller-built witness. The engine checks only the box; feasibility for
/// certified_for rests on the caller's certificate, which travels with the result.
struct ExplicitWitness {
  OperatorMatrix op;
  FreeSet certified_for = FreeSet::WignerPositive;
  std::string certificate;  // empty: results are conditional lower bounds
  bool on_two_copies = false;
};

using WitnessFamily = std::variant<DisplacedParity, PureProjector, TwoCopyProjector, ExplicitWitness>;

struct WitnessSpec {
  WitnessFamily family;
  WitnessBox box;
  FreeSet free_set = FreeSet::WignerPositive;
  double scale = 1.0;    // the operator is scale * (family operator)
  bool lifted = false;   // single-copy witness used as W (x) I on two copies

  /// Acts on rho (x) rho rather than rho.
  bool two_copy() const;
  /// Feasible for free_set by construction (no caller certificate involved).
  bool certified() const;
  std::string describe() const;
};

/// Smallest and largest eigenvalue of the (scaled) witness.
std::pair<double, double> witness_spectrum(const WitnessSpec& spec);

/// Throws BoxViolation when the spectrum leaves [-n, m] (tolerance 1e-9).
void check_box(const WitnessSpec& spec);

/// Dense matrix of the witness; two-copy and lifted specs live on the product
/// space and are subject to the product budget.
OperatorMatrix witness_matrix(const WitnessSpec& spec, FockCutoff cutoff,
                              std::size_t budget = kDefaultProductBudget);

/// -Tr(W rho), or -Tr(W rho (x) rho) for two-copy specs (evaluated in product
/// form, so no product space is built).
double witness_value(const WitnessSpec& spec, const DensityMatrix& rho);

/// t w with t = min(n, m) / norm_bound(w).
OperatorMatrix rescale_to_box(const OperatorMatrix& w, const WitnessBox& box);

/// Same rescaling applied to a spec (sets spec.scale).
WitnessSpec rescale_to_box(WitnessSpec spec);

/// Spectral norm of the unscaled family operator.
double family_norm(const WitnessFamily& f);

/// W (x) I.
OperatorMatrix lift_witness(const OperatorMatrix& w, std::size_t budget = kDefaultProductBudget);

struct GaussianFidelityConfig {
  std::vector<std::uint64_t> seeds{20240917u};
  int starts = 16;
  double r_max = kDefaultMaxSqueezing;
  double f_tol = 1e-13;
  int max_iter = 4000;
};

struct GaussianFidelityResult {
  double lambda_g = 0.0;
  GaussianPureParams argmax;
  double multistart_spread = 0.0;
  int starts_converged = 0;
};

/// sup over pure Gaussian states of |<psi|G>|^2, by multistart Nelder-Mead in
/// (Re alpha, Im alpha, r, phi). The overlap only needs the Gaussian's first
/// dim amplitudes, which the recurrence gives exactly, so no truncation enters.
GaussianFidelityResult gaussian_fidelity(const PureState& psi, const GaussianFidelityConfig& cfg = {});

/// |<psi|G(p)>|^2.
double gaussian_overlap(const PureState& psi, const GaussianPureParams& p);

}  // namespace cvwit
