#pragma once

// Measure-and-prepare channels that turn a witness violation into two-qubit
// Werner-state correlations, and closed-form Werner analytics.

#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "cvwit/witness.hpp"

namespace cvwit {

/// q |psi-><psi-| + (1 - q) I/4, q in [-1/3, 1].
class WernerState {
 public:
  explicit WernerState(double q);
  double q() const noexcept { return q_; }
  Eigen::Matrix4cd matrix() const;

 private:
  double q_;
};

enum class Correlation { Separable, EntangledUnsteerable, SteerableCHSHLocal, BellNonlocal };
std::string_view to_string(Correlation c);

/// q <= 1/3, q <= 1/2, q <= 1/sqrt(2), otherwise nonlocal.
Correlation classify(double q);

enum class ActivationChannel { Entanglement, Steering, None };
std::string_view to_string(ActivationChannel c);

struct ActivationOutcome {
  WernerState werner{0.0};
  double entanglement = 0.0;  // [(3q - 1)/4]_+
  double steering = 0.0;      // [2q - 1]_+
  double discord = 0.0;       // q^2 / 2
  double chsh = 0.0;          // [2 sqrt(2) q - 2]_+
  Correlation classification = Correlation::Separable;
  ActivationChannel channel = ActivationChannel::None;
  /// -Tr(W rho) of the witness that drove the channel (0 for plain analytics).
  double witness_violation = 0.0;
  /// Negativity of the partial transpose of the explicit 4x4 output.
  double pt_negativity = 0.0;
  /// Geometric discord minimized over projective measurements on qubit A.
  double discord_bruteforce = 0.0;
  std::string witness;
};

/// M+ = (I + W)/2, M- = (I - W)/2. Throws BoxViolation outside [-1, 1].
std::pair<OperatorMatrix, OperatorMatrix> povm_from_witness(const OperatorMatrix& w);

/// p = Tr(M- rho) prepares p |psi-><psi-| + (1 - p)(I - |psi-><psi-|)/3.
ActivationOutcome activate_entanglement(const DensityMatrix& rho, const WitnessSpec& spec);

/// p = Tr(M- rho) prepares p |psi-><psi-| + (1 - p) I/4.
ActivationOutcome activate_steering(const DensityMatrix& rho, const WitnessSpec& spec);

/// True iff the discord exceeds what any free input can reach through the
/// outcome's channel: 1/18 for the entanglement channel and plain Werner
/// states (q <= 1/3), 1/8 for the steering channel (q <= 1/2).
/// False means inconclusive.
bool discord_certificate(const ActivationOutcome& outcome);
double discord_threshold(ActivationChannel c);

/// All measures from closed forms, cross-checked against the explicit matrix.
ActivationOutcome werner_analytics(double q);

/// Sum of |negative eigenvalues| of the partial transpose on qubit B.
double pt_negativity(const Eigen::Matrix4cd& rho);

/// min over Bloch directions of || rho - sum_k (P_k (x) I) rho (P_k (x) I) ||_HS^2.
double geometric_discord_bruteforce(const Eigen::Matrix4cd& rho, int polar_steps = 24, int azimuth_steps = 48);

}  // namespace cvwit
