#include "cvwit/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvwit/errors.hpp"
#include "cvwit/nelder_mead.hpp"

namespace cvwit {

namespace {
constexpr double kImagTol = 1e-10;
constexpr double kRankTol = 1e-14;
}  // namespace

struct WignerEvaluator::AngleFrame {
  Matrix m;  // rotated state (dense) or rotated weighted eigenvectors (low rank)
};

namespace {

// Mass a displacement by r pushes above dim, estimated level by level:
// D(alpha)|n> reaches out to (sqrt(n) + r)^2, and a Poisson tail centred on
// that edge overestimates what lies beyond it.
double displaced_tail(const std::vector<std::pair<int, double>>& pops, double r, int dim) {
  double t = 0.0;
  for (auto [n, p] : pops) {
    const double edge = std::sqrt(static_cast<double>(n)) + r;
    t += p * coherent_tail(edge * edge, dim);
  }
  return t;
}

}  // namespace

WignerEvaluator::WignerEvaluator(const DensityMatrix& rho, double guard, double reach)
    : cutoff_(rho.cutoff()), guard_(guard), gen_(FockCutoff(2)) {
  const int d = cutoff_.dim();
  if (!(reach > 0.0)) reach = default_search_radius(rho);
  std::vector<std::pair<int, double>> pops;
  for (int n = 0; n < d; ++n) {
    const double p = rho.matrix()(n, n).real();
    if (p > 1e-300) pops.push_back({n, p});
  }
  // Smallest padded dimension keeping the whole reach inside the guard, up to
  // a cap; past the cap the usable radius shrinks instead.
  const int cap = d + std::max(64, d / 2);
  int work = d;
  while (work < cap && displaced_tail(pops, reach, work) > guard_) work = std::min(cap, work + 4);
  work_dim_ = work;
  if (displaced_tail(pops, reach, work) <= guard_) {
    max_radius_ = reach;
  } else if (displaced_tail(pops, 0.0, work) > guard_) {
    max_radius_ = 0.0;
  } else {
    double lo = 0.0, hi = reach;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (displaced_tail(pops, mid, work) <= guard_ ? lo : hi) = mid;
    }
    max_radius_ = lo;
  }

  const FockCutoff wc(work);
  gen_ = DisplacementGenerator(wc);
  parity_frame_ = gen_.basis().adjoint() * parity_op(wc).matrix() * gen_.basis();
  auto e = eigh(rho.matrix());
  const double top = std::max(e.values.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<int> keep;
  for (int i = d - 1; i >= 0; --i)
    if (e.values(i) > kRankTol * top) keep.push_back(i);
  if (4 * static_cast<int>(keep.size()) <= work) {
    low_rank_ = true;
    const int r = static_cast<int>(keep.size());
    vectors_ = Matrix::Zero(work, r);
    weights_.resize(r);
    for (int i = 0; i < r; ++i) {
      weights_(i) = e.values(keep[i]);
      vectors_.col(i).head(d) = std::sqrt(weights_(i)) * e.vectors.col(keep[i]);
    }
  } else {
    rho_ = Matrix::Zero(work, work);
    rho_.topLeftCorner(d, d) = rho.matrix();
    weights_ = e.values;
  }
}

bool WignerEvaluator::in_range(Complex alpha) const { return std::abs(alpha) <= max_radius_; }

WignerEvaluator::AngleFrame WignerEvaluator::frame(double theta) const {
  const Vector rot = gen_.rotation(theta);
  if (low_rank_) return {gen_.basis().adjoint() * (rot.conjugate().asDiagonal() * vectors_)};
  const Matrix t = gen_.basis().adjoint() * rot.conjugate().asDiagonal();
  return {t * rho_ * t.adjoint()};
}

double WignerEvaluator::evaluate(const AngleFrame& f, double r) const {
  const RealVector& lambda = gen_.spectrum();
  Vector ph(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) ph(k) = std::polar(1.0, -r * lambda(k));
  Complex v;
  if (low_rank_) {
    const Matrix z = ph.asDiagonal() * f.m;
    v = (parity_frame_ * z).cwiseProduct(z.conjugate()).sum();
  } else {
    const Matrix a = ph.asDiagonal() * f.m * ph.conjugate().asDiagonal();
    // Tr(P A) = sum_ab P_ab A_ba
    v = parity_frame_.cwiseProduct(a.transpose()).sum();
  }
  if (std::abs(v.imag()) > kImagTol) {
    throw InvariantError("displaced parity has imaginary part " + std::to_string(v.imag()));
  }
  if (std::abs(v.real()) > 1.0 + 1e-9) {
    throw InvariantError("displaced parity " + std::to_string(v.real()) + " outside [-1,1]");
  }
  return v.real();
}

double WignerEvaluator::displaced_parity(Complex alpha) const {
  if (!in_range(alpha)) {
    throw TruncationError("displacement |alpha|=" + std::to_string(std::abs(alpha)) + " beyond the usable radius " +
                          std::to_string(max_radius_) + " at cutoff " + std::to_string(cutoff_.dim()));
  }
  return evaluate(frame(std::arg(alpha)), std::abs(alpha));
}

std::vector<std::optional<double>> WignerEvaluator::parity_along_ray(double theta,
                                                                     const std::vector<double>& radii) const {
  std::vector<std::optional<double>> out(radii.size());
  const AngleFrame f = frame(theta);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (in_range(std::polar(radii[i], theta))) out[i] = evaluate(f, radii[i]);
  }
  return out;
}

double wigner_at(const DensityMatrix& rho, Complex alpha) {
  const WignerEvaluator ev(rho, kDisplacementGuard, std::max(std::abs(alpha), 1e-3));
  return ev.wigner(alpha);
}

double default_search_radius(const DensityMatrix& rho) {
  const int d = rho.dim();
  double n = 0.0;
  for (int k = 0; k < d; ++k) n += k * rho.matrix()(k, k).real();
  return 3.0 * std::sqrt(std::max(n, 0.0)) + 2.0;
}

WignerGrid wigner_grid(const DensityMatrix& rho, double radius, int resolution) {
  if (resolution < 1) throw PreconditionError("grid resolution must be positive");
  WignerGrid g;
  g.radius = radius > 0.0 ? radius : default_search_radius(rho);
  g.resolution = resolution;
  const WignerEvaluator ev(rho, kDisplacementGuard, std::numbers::sqrt2 * g.radius);
  const double h = g.radius / resolution;
  for (int i = -resolution; i <= resolution; ++i) {
    for (int j = -resolution; j <= resolution; ++j) {
      const Complex a(i * h, j * h);
      if (!ev.in_range(a)) {
        g.dropped.push_back(a);
        continue;
      }
      g.centers.push_back(a);
      g.values.push_back(ev.wigner(a));
    }
  }
  return g;
}

namespace {

struct Candidate {
  Complex alpha;
  double parity;
};

// Larger depth first, then smaller |alpha|.
bool better(const Candidate& a, const Candidate& b) {
  constexpr double tie = 1e-12;
  if (a.parity < b.parity - tie) return true;
  if (b.parity < a.parity - tie) return false;
  return std::abs(a.alpha) < std::abs(b.alpha);
}

}  // namespace

NegativityDepthResult negativity_depth(const DensityMatrix& rho, const DepthSearchConfig& cfg) {
  const double radius = cfg.radius > 0.0 ? cfg.radius : default_search_radius(rho);
  const WignerEvaluator ev(rho, kDisplacementGuard, radius);
  return negativity_depth(ev, radius, cfg);
}

NegativityDepthResult negativity_depth(const WignerEvaluator& ev, double radius, const DepthSearchConfig& cfg) {
  if (cfg.radial_points < 1 || cfg.angular_points < 1) throw PreconditionError("depth search grid must be nonempty");
  if (!(radius > 0.0)) throw PreconditionError("depth search radius must be positive");
  NegativityDepthResult res;

  std::vector<double> radii;
  for (int k = 1; k <= cfg.radial_points; ++k) radii.push_back(radius * k / cfg.radial_points);
  std::vector<Candidate> scan;
  scan.push_back({0.0, ev.displaced_parity(0.0)});
  for (int l = 0; l < cfg.angular_points; ++l) {
    const double theta = 2.0 * std::numbers::pi * l / cfg.angular_points;
    const auto vals = ev.parity_along_ray(theta, radii);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      if (vals[k]) {
        scan.push_back({std::polar(radii[k], theta), *vals[k]});
      } else {
        ++res.dropped_points;
      }
    }
  }
  std::stable_sort(scan.begin(), scan.end(), better);

  // Starting points: best scan values that are not crowded together.
  const double spacing = std::max(radius / cfg.radial_points, radius * 2.0 * std::numbers::pi / cfg.angular_points / 4.0);
  std::vector<Candidate> starts;
  for (const auto& c : scan) {
    if (static_cast<int>(starts.size()) >= cfg.refine_starts) break;
    const bool crowded = std::any_of(starts.begin(), starts.end(),
                                     [&](const Candidate& s) { return std::abs(s.alpha - c.alpha) < 1.5 * spacing; });
    if (!crowded) starts.push_back(c);
  }

  auto objective = [&](std::span<const double> x) {
    const Complex a(x[0], x[1]);
    if (!ev.in_range(a)) return 2.0;
    return ev.displaced_parity(a);
  };
  NelderMeadOptions opt;
  opt.f_tol = cfg.f_tol;
  opt.max_iter = cfg.max_iter;
  opt.step = {0.5 * radius / cfg.radial_points};

  Candidate best = scan.front();
  bool best_converged = true;
  for (const auto& s : starts) {
    const auto r = nelder_mead(objective, {s.alpha.real(), s.alpha.imag()}, opt);
    Candidate refined{Complex(r.x[0], r.x[1]), r.f};
    bool conv = r.converged;
    if (!better(refined, s)) {
      refined = s;
    }
    if (better(refined, best)) {
      best = refined;
      best_converged = conv;
    }
  }
  res.min_parity = best.parity;
  res.argmin_alpha = best.alpha;
  res.depth = std::max(0.0, -kWignerScale * best.parity);
  res.refinement_converged = best_converged;
  return res;
}

}  // namespace cvwit
