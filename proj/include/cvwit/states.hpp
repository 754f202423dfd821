#pragma once

// Canonical single-mode states in the truncated Fock basis.

#include <string>
#include <string_view>

#include "cvwit/fock.hpp"

namespace cvwit {

inline constexpr double kDefaultMaxSqueezing = 2.0;

/// D(alpha) S(r e^{i phi}) |0>, with S(xi) = exp((conj(xi) a^2 - xi a^dag^2)/2).
struct GaussianPureParams {
  Complex alpha{0.0, 0.0};
  double r = 0.0;
  double phi = 0.0;
};

/// Square-lattice codewords; peaks sit at multiples of sqrt(pi) in q.
enum class GkpLogical { Zero, One, Plus, Minus };

struct GkpParams {
  double epsilon = 0.1;
  GkpLogical logical = GkpLogical::Zero;
  /// Lattice peaks |s| <= peak_window; 0 picks the smallest window that is
  /// stable under S -> S+2.
  int peak_window = 0;
};

std::string_view to_string(GkpLogical l);
GkpLogical parse_gkp_logical(std::string_view s);

/// -10 log10(tanh epsilon) and its inverse.
double gkp_squeezing_db(double epsilon);
double gkp_epsilon_from_db(double db);

PureState fock(int n, FockCutoff cutoff);

/// Throws TruncationError when the amplitude mass above the cutoff exceeds guard.
PureState coherent(Complex alpha, FockCutoff cutoff, double guard = kDisplacementGuard);

/// Exact Fock amplitudes of the displaced squeezed state, truncated and
/// renormalized. Throws PreconditionError for r > r_max and TruncationError
/// when the mass above the cutoff exceeds guard.
PureState gaussian_pure(const GaussianPureParams& p, FockCutoff cutoff, double guard = kDisplacementGuard,
                        double r_max = kDefaultMaxSqueezing);

/// Unnormalized-then-renormalized amplitudes without the guard; returns the
/// captured mass (norm^2 of the truncated vector) through captured.
Vector gaussian_pure_amplitudes(const GaussianPureParams& p, int dim, double* captured = nullptr);

/// |alpha> + sign |-alpha>, normalized. alpha = 0 returns the limiting state
/// (|0> for sign +1, |1> for sign -1).
PureState cat(Complex alpha, int sign, FockCutoff cutoff, double guard = kDisplacementGuard);

/// a S(r)|0>, normalized. r = 0 is rejected (the vector vanishes).
PureState photon_subtracted_squeezed(double r, FockCutoff cutoff, double guard = kDisplacementGuard,
                                     double r_max = kDefaultMaxSqueezing);

/// e^{-epsilon n} applied to a comb of position eigenstates, projected onto
/// Fock levels with Gauss-Hermite quadrature. Throws TruncationError if more
/// than tail_guard of the codeword lies above the cutoff and PreconditionError
/// if a caller-fixed peak window is not converged.
PureState gkp_damped(const GkpParams& p, FockCutoff cutoff, double tail_guard = 1e-6);

/// Peak window gkp_damped would pick automatically.
int gkp_auto_window(double epsilon, GkpLogical logical);

/// Smallest cutoff at which gkp_damped passes a tail guard.
int gkp_required_cutoff(double epsilon, double tail_guard = 1e-6);

DensityMatrix thermal(double mean_photons, FockCutoff cutoff);

}  // namespace cvwit
