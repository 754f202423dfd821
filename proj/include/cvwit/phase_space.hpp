#pragma once

// Wigner function through displaced parity, grids, and negativity depth.

#include <numbers>
#include <optional>
#include <vector>

#include "cvwit/displacement.hpp"
#include "cvwit/fock.hpp"

namespace cvwit {

inline constexpr double kWignerScale = 2.0 / std::numbers::pi;

/// Evaluates Tr(Pi(alpha) rho) with Pi(alpha) = D(alpha) Pi D(alpha)^dag for one
/// fixed state. Low-rank states go through their eigenvectors, everything else
/// through the rotated density matrix, which is cached per angle.
///
/// The state is zero-padded to a working dimension large enough that displacing
/// it by up to `reach` keeps the estimated mass pushed past the padding below
/// guard (Fock level n counts as reaching (sqrt(n) + |alpha|)^2). The padding
/// is capped at max(64, dim/2) extra levels; past that the usable radius
/// shrinks below reach. reach <= 0 selects default_search_radius.
class WignerEvaluator {
 public:
  explicit WignerEvaluator(const DensityMatrix& rho, double guard = kDisplacementGuard, double reach = 0.0);

  FockCutoff cutoff() const noexcept { return cutoff_; }
  int working_dim() const noexcept { return work_dim_; }
  /// Largest |alpha| accepted by in_range.
  double max_radius() const noexcept { return max_radius_; }
  int rank() const noexcept { return static_cast<int>(weights_.size()); }
  bool low_rank() const noexcept { return low_rank_; }

  /// False beyond max_radius().
  bool in_range(Complex alpha) const;

  /// Tr(Pi(alpha) rho); throws TruncationError beyond max_radius().
  double displaced_parity(Complex alpha) const;

  /// (2/pi) Tr(Pi(alpha) rho).
  double wigner(Complex alpha) const { return kWignerScale * displaced_parity(alpha); }

  /// Displaced parity at r e^{i theta} for every r, sharing the angle-dependent work.
  /// Radii beyond max_radius() yield std::nullopt.
  std::vector<std::optional<double>> parity_along_ray(double theta, const std::vector<double>& radii) const;

 private:
  struct AngleFrame;
  AngleFrame frame(double theta) const;
  double evaluate(const AngleFrame& f, double r) const;

  FockCutoff cutoff_;
  double guard_;
  int work_dim_ = 0;
  double max_radius_ = 0.0;
  DisplacementGenerator gen_;
  Matrix parity_frame_;  // V^dag Pi V
  bool low_rank_ = false;
  Matrix rho_;
  Matrix vectors_;        // kept eigenvectors (low-rank path)
  RealVector weights_;    // kept eigenvalues
};

/// (2/pi) Tr(Pi(alpha) rho) in one call.
double wigner_at(const DensityMatrix& rho, Complex alpha);

struct WignerGrid {
  std::vector<Complex> centers;
  std::vector<double> values;
  double radius = 0.0;
  int resolution = 0;
  /// Grid points skipped by the truncation guard.
  std::vector<Complex> dropped;
};

/// Square grid of (2 resolution + 1)^2 points over [-radius, radius]^2 in
/// (Re alpha, Im alpha). Radius <= 0 selects 3 sqrt(<n>) + 2.
WignerGrid wigner_grid(const DensityMatrix& rho, double radius, int resolution);

/// 3 sqrt(<n>) + 2.
double default_search_radius(const DensityMatrix& rho);

struct DepthSearchConfig {
  double radius = 0.0;  // <= 0 selects default_search_radius
  int radial_points = 24;
  int angular_points = 48;
  int refine_starts = 5;
  double f_tol = 1e-8;
  int max_iter = 200;
};

struct NegativityDepthResult {
  double depth = 0.0;            // max_alpha [-W(alpha)]_+
  Complex argmin_alpha{0.0, 0.0};
  bool refinement_converged = true;
  double min_parity = 1.0;       // Tr(Pi(argmin) rho)
  int dropped_points = 0;
};

/// Polar scan, then Nelder-Mead from the refine_starts best well-separated
/// scan points. Ties go to the larger depth, then the smaller |alpha|.
NegativityDepthResult negativity_depth(const DensityMatrix& rho, const DepthSearchConfig& cfg = {});
NegativityDepthResult negativity_depth(const WignerEvaluator& eval, double radius, const DepthSearchConfig& cfg);

}  // namespace cvwit
