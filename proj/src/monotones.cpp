#include "cvwit/monotones.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvwit/errors.hpp"

namespace cvwit {

namespace {

constexpr double kOddParityTol = 1e-10;
constexpr double kMinEigenWeight = 1e-6;

int rank_of(FreeSet f) { return static_cast<int>(f); }

struct Candidate {
  WitnessSpec spec;
  double value;  // already scaled into the box
};

void consider(std::optional<Candidate>& best, WitnessSpec spec, double value) {
  if (!best || value > best->value + 1e-15) best = Candidate{std::move(spec), value};
}

MonotoneBound finish(const std::optional<Candidate>& best, FreeSet fs, const WitnessBox& box) {
  MonotoneBound b;
  b.free_set = fs;
  b.upper = box.n;
  if (best) {
    b.lower = std::clamp(best->value, 0.0, box.n);
    b.witness_used = best->spec;
    if (!best->spec.certified()) b.certificate = "conditional";
  }
  return b;
}

}  // namespace

MonotoneBound lower_bound(const DensityMatrix& rho, const FamilySearchConfig& cfg, FreeSet free_set,
                          const WitnessBox& box) {
  box.validate();
  const double side = box.min_side();
  std::optional<Candidate> best;

  // Displaced parity: one depth search serves every free set.
  const double radius = cfg.depth.radius > 0 ? cfg.depth.radius : default_search_radius(rho);
  const WignerEvaluator ev(rho, kDisplacementGuard, radius);
  const double parity0 = ev.displaced_parity(0.0);
  const bool odd = parity0 <= -1.0 + kOddParityTol;
  const bool exact_odd = odd && box.n == box.m;
  {
    DisplacedParity dp{0.0};
    double raw = -parity0;
    if (!odd) {
      const auto depth = negativity_depth(ev, radius, cfg.depth);
      if (-depth.min_parity > raw) {
        raw = -depth.min_parity;
        dp.alpha = depth.argmin_alpha;
      }
    }
    WitnessSpec s{dp, box, free_set, side, rank_of(free_set) == 2};
    consider(best, s, side * raw);
  }

  std::vector<PureState> projector_states;
  std::vector<double> projector_lambda;
  if (rank_of(free_set) >= 1 && !exact_odd) {
    const auto e = eigh(rho.matrix());
    for (int i = rho.dim() - 1; i >= 0 && static_cast<int>(projector_states.size()) < cfg.projector_candidates; --i) {
      if (e.values(i) < kMinEigenWeight) break;
      try {
        PureState u(e.vectors.col(i), rho.leakage());
        const double lam = gaussian_fidelity(u, cfg.fidelity).lambda_g;
        projector_states.push_back(u);
        projector_lambda.push_back(lam);
      } catch (const TruncationError&) {
        // leaky eigenvector: skip, the bound stays certified without it
      }
    }
    for (std::size_t k = 0; k < projector_states.size(); ++k) {
      WitnessSpec s{PureProjector{projector_states[k], projector_lambda[k]}, box, free_set, 1.0,
                    rank_of(free_set) == 2};
      s = rescale_to_box(s);
      consider(best, s, witness_value(s, rho));
    }
  }
  if (rank_of(free_set) == 2) {
    for (std::size_t k = 0; k < projector_states.size(); ++k) {
      WitnessSpec s{TwoCopyProjector{projector_states[k], projector_lambda[k]}, box, free_set, 1.0, false};
      s = rescale_to_box(s);
      consider(best, s, witness_value(s, rho));
    }
  }

  for (const auto& w : cfg.explicit_witnesses) {
    const auto* e = std::get_if<ExplicitWitness>(&w.family);
    if (!e || rank_of(e->certified_for) > rank_of(free_set)) continue;
    WitnessSpec s = w;
    s.free_set = free_set;
    s.box = box;
    if (rank_of(free_set) == 2 && !e->on_two_copies) s.lifted = true;
    if (rank_of(free_set) < 2 && e->on_two_copies) continue;
    s = rescale_to_box(s);
    consider(best, s, witness_value(s, rho));
  }

  MonotoneBound b = finish(best, free_set, box);
  if (exact_odd) {
    // -Tr(W rho) <= n for every boxed W, and the rescaled parity reaches it.
    b.lower = b.upper = box.n;
    b.exact = true;
  }
  return b;
}

std::vector<BoundaryMixPoint> exact_boundary_mixture(const DensityMatrix& sigma, const DensityMatrix& tau,
                                                     const OperatorMatrix& x, const std::vector<double>& t_grid,
                                                     const FamilySearchConfig& cfg) {
  require_same(sigma.cutoff(), tau.cutoff(), "exact_boundary_mixture");
  if (x.dim() != sigma.dim()) throw DimensionError("boundary mixture witness dimension mismatch");
  if (!x.is_hermitian()) throw PreconditionError("boundary mixture witness must be Hermitian");
  const auto ev = eigh(x.matrix()).values;
  const double on_sigma = sigma.expectation(x.matrix());
  const double on_tau = tau.expectation(x.matrix());
  if (ev(0) < -1.0 - 1e-9 || ev(ev.size() - 1) > 1.0 + 1e-9 || std::abs(on_sigma) > 1e-8 ||
      std::abs(on_tau + 1.0) > 1e-8) {
    std::ostringstream os;
    os << "boundary mixing preconditions fail: spectrum [" << ev(0) << ", " << ev(ev.size() - 1)
       << "], Tr(X sigma) = " << on_sigma << ", Tr(X tau) + 1 = " << on_tau + 1.0;
    throw PreconditionError(os.str());
  }
  std::vector<BoundaryMixPoint> out;
  for (double t : t_grid) {
    if (t < 0.0 || t > 1.0) throw PreconditionError("mixing parameter outside [0,1]");
    const DensityMatrix rho_t = mix(t, tau, sigma);
    const MonotoneBound b = lower_bound(rho_t, cfg, FreeSet::WignerPositive, WitnessBox{1.0, 1.0});
    if (b.lower > t + 1e-6) {
      throw InvariantError("searched bound exceeds the exact boundary-mixture value");
    }
    out.push_back({t, t, b.lower, std::abs(b.lower - t) <= 1e-6});
  }
  return out;
}

PureStateBounds pure_state_bounds(const PureState& psi, const GaussianFidelityConfig& cfg) {
  PureStateBounds b;
  b.fidelity = gaussian_fidelity(psi, cfg);
  b.lambda_g = b.fidelity.lambda_g;
  b.gng_lower = 1.0 - b.lambda_g;
  b.sng_lower = 1.0 - b.lambda_g * b.lambda_g;
  return b;
}

HierarchyResult hierarchy_check(const DensityMatrix& rho, const WitnessBox& box, const FamilySearchConfig& cfg) {
  HierarchyResult h{lower_bound(rho, cfg, FreeSet::WignerPositive, box),
                    lower_bound(rho, cfg, FreeSet::ConvexGaussianHull, box),
                    lower_bound(rho, cfg, FreeSet::GaussianTwoCopy, box)};
  if (!(h.wn.lower <= h.gng.lower + 1e-9 && h.gng.lower + 1e-9 <= h.sng.lower + 2e-9)) {
    std::ostringstream os;
    os << "monotone hierarchy broken: " << h.wn.lower << ", " << h.gng.lower << ", " << h.sng.lower;
    throw InvariantError(os.str());
  }
  return h;
}

PropertyReport property_suite(const std::vector<DensityMatrix>& states, const std::vector<FreeChannel>& channels,
                              FreeSet free_set, const WitnessBox& box, const FamilySearchConfig& cfg) {
  PropertyReport rep;
  const double c = std::max(box.n, box.m);
  std::vector<double> bounds;
  bounds.reserve(states.size());
  for (const auto& s : states) bounds.push_back(lower_bound(s, cfg, free_set, box).lower);

  auto fail = [&](std::string prop, std::string detail, double excess) {
    rep.failures.push_back({std::move(prop), std::move(detail), excess});
  };

  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const auto& ch : channels) {
      if (std::find(ch.free_for.begin(), ch.free_for.end(), free_set) == ch.free_for.end()) continue;
      const double after = lower_bound(ch.apply(states[i]), cfg, free_set, box).lower;
      ++rep.checks;
      if (after > bounds[i] + 1e-6) {
        fail("monotonicity", ch.label + " on state " + std::to_string(i), after - bounds[i]);
      }
    }
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      if (states[i].dim() != states[j].dim()) continue;
      for (double p : {0.25, 0.5, 0.75}) {
        const double mixed = lower_bound(mix(p, states[i], states[j]), cfg, free_set, box).lower;
        const double chord = p * bounds[i] + (1.0 - p) * bounds[j];
        ++rep.checks;
        if (mixed > chord + 1e-6) {
          fail("convexity", "states " + std::to_string(i) + "," + std::to_string(j) + " p=" + std::to_string(p),
               mixed - chord);
        }
      }
      const double dist = trace_norm(Matrix(states[i].matrix() - states[j].matrix()));
      const double gap = std::abs(bounds[i] - bounds[j]);
      ++rep.checks;
      if (gap > c * dist + 1e-8) {
        fail("lipschitz", "states " + std::to_string(i) + "," + std::to_string(j), gap - c * dist);
      }
    }
  }
  return rep;
}

}  // namespace cvwit
