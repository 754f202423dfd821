#include "cvwit/witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cvwit/errors.hpp"
#include "cvwit/phase_space.hpp"

namespace cvwit {

namespace {
constexpr double kBoxTol = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int free_set_rank(FreeSet f) {
  switch (f) {
    case FreeSet::WignerPositive: return 0;
    case FreeSet::ConvexGaussianHull: return 1;
    case FreeSet::GaussianTwoCopy: return 2;
  }
  return 0;
}

double require_lambda(const std::optional<double>& l) {
  if (!l) throw PreconditionError("projector witness needs its Gaussian fidelity (missing lambda)");
  if (*l < 0.0 || *l > 1.0 + 1e-12) throw PreconditionError("Gaussian fidelity outside [0,1]");
  return *l;
}

}  // namespace

void WitnessBox::validate() const {
  if (!(n > 0.0) || !(m > 0.0)) throw PreconditionError("witness box sides must be positive");
}

std::string_view to_string(FreeSet f) {
  switch (f) {
    case FreeSet::WignerPositive: return "wigner_positive";
    case FreeSet::ConvexGaussianHull: return "convex_gaussian_hull";
    case FreeSet::GaussianTwoCopy: return "gaussian_two_copy";
  }
  return "wigner_positive";
}

FreeSet parse_free_set(std::string_view s) {
  if (s == "wigner_positive" || s == "wn") return FreeSet::WignerPositive;
  if (s == "convex_gaussian_hull" || s == "gng") return FreeSet::ConvexGaussianHull;
  if (s == "gaussian_two_copy" || s == "sng") return FreeSet::GaussianTwoCopy;
  throw ConfigError("unknown free set '" + std::string(s) + "'");
}

bool WitnessSpec::two_copy() const {
  if (lifted) return true;
  if (std::holds_alternative<TwoCopyProjector>(family)) return true;
  if (const auto* e = std::get_if<ExplicitWitness>(&family)) return e->on_two_copies;
  return false;
}

bool WitnessSpec::certified() const {
  const int need = free_set_rank(free_set);
  return std::visit(overloaded{
                        [&](const DisplacedParity&) { return true; },
                        [&](const PureProjector& p) { return p.lambda.has_value() && need >= 1; },
                        [&](const TwoCopyProjector& p) { return p.lambda.has_value() && need == 2; },
                        [&](const ExplicitWitness& e) {
                          return !e.certificate.empty() && free_set_rank(e.certified_for) <= need;
                        },
                    },
                    family);
}

std::string WitnessSpec::describe() const {
  std::ostringstream os;
  os.precision(12);
  std::visit(overloaded{
                 [&](const DisplacedParity& d) { os << "displaced_parity(" << d.alpha.real() << "," << d.alpha.imag() << ")"; },
                 [&](const PureProjector& p) { os << "pure_projector(lambda=" << p.lambda.value_or(-1.0) << ")"; },
                 [&](const TwoCopyProjector& p) { os << "two_copy_projector(lambda=" << p.lambda.value_or(-1.0) << ")"; },
                 [&](const ExplicitWitness& e) {
                   os << "explicit(" << (e.certificate.empty() ? "uncertified" : e.certificate) << ")";
                 },
             },
             family);
  if (lifted) os << "(x)I";
  if (scale != 1.0) os << "*" << scale;
  return os.str();
}

double family_norm(const WitnessFamily& f) {
  return std::visit(overloaded{
                        [](const DisplacedParity&) { return 1.0; },
                        [](const PureProjector& p) {
                          const double l = require_lambda(p.lambda);
                          return std::max(l, 1.0 - l);
                        },
                        [](const TwoCopyProjector& p) {
                          const double l = require_lambda(p.lambda);
                          return std::max(l * l, 1.0 - l * l);
                        },
                        [](const ExplicitWitness& e) { return e.op.norm_bound(); },
                    },
                    f);
}

std::pair<double, double> witness_spectrum(const WitnessSpec& spec) {
  auto [lo, hi] = std::visit(overloaded{
                                 [](const DisplacedParity&) { return std::pair{-1.0, 1.0}; },
                                 [](const PureProjector& p) {
                                   const double l = require_lambda(p.lambda);
                                   return std::pair{l - 1.0, l};
                                 },
                                 [](const TwoCopyProjector& p) {
                                   const double l = require_lambda(p.lambda);
                                   return std::pair{l * l - 1.0, l * l};
                                 },
                                 [](const ExplicitWitness& e) {
                                   if (!e.op.is_hermitian()) throw PreconditionError("explicit witness must be Hermitian");
                                   const auto ev = eigh(e.op.matrix()).values;
                                   return std::pair{ev(0), ev(ev.size() - 1)};
                                 },
                             },
                             spec.family);
  if (spec.scale >= 0.0) return {spec.scale * lo, spec.scale * hi};
  return {spec.scale * hi, spec.scale * lo};
}

void check_box(const WitnessSpec& spec) {
  spec.box.validate();
  if (free_set_rank(spec.free_set) < 2 && spec.two_copy()) {
    throw PreconditionError("two-copy witness used for a single-copy free set");
  }
  const auto [lo, hi] = witness_spectrum(spec);
  if (lo < -spec.box.n - kBoxTol || hi > spec.box.m + kBoxTol) {
    std::ostringstream os;
    os << "witness spectrum [" << lo << ", " << hi << "] leaves box [-" << spec.box.n << ", " << spec.box.m << "]";
    throw BoxViolation(os.str());
  }
}

OperatorMatrix lift_witness(const OperatorMatrix& w, std::size_t budget) {
  const OperatorMatrix id(Matrix::Identity(w.dim(), w.dim()), true, 1.0);
  return tensor(w, id, budget);
}

OperatorMatrix witness_matrix(const WitnessSpec& spec, FockCutoff cutoff, std::size_t budget) {
  check_box(spec);
  const int d = cutoff.dim();
  OperatorMatrix base = std::visit(
      overloaded{
          [&](const DisplacedParity& dp) {
            const Matrix dm = DisplacementGenerator(cutoff).displacement(dp.alpha);
            Matrix w = dm * parity_op(cutoff).matrix() * dm.adjoint();
            return OperatorMatrix(0.5 * (w + w.adjoint()), true, 1.0);
          },
          [&](const PureProjector& p) {
            require_same(p.psi.cutoff(), cutoff, "witness_matrix");
            const double l = require_lambda(p.lambda);
            Matrix w = l * Matrix::Identity(d, d) - p.psi.amplitudes() * p.psi.amplitudes().adjoint();
            return OperatorMatrix(std::move(w), true, std::max(l, 1.0 - l));
          },
          [&](const TwoCopyProjector& p) {
            require_same(p.psi.cutoff(), cutoff, "witness_matrix");
            const double l = require_lambda(p.lambda);
            const auto dd = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
            if (dd > budget) throw BudgetError("two-copy witness exceeds product budget");
            const Matrix col = p.psi.amplitudes();
            const Vector pp = kron(col, col).col(0);
            Matrix w = l * l * Matrix::Identity(d * d, d * d) - pp * pp.adjoint();
            return OperatorMatrix(std::move(w), true, std::max(l * l, 1.0 - l * l));
          },
          [&](const ExplicitWitness& e) {
            const int expect = e.on_two_copies ? d * d : d;
            if (e.op.dim() != expect) throw DimensionError("explicit witness dimension mismatch");
            return e.op;
          },
      },
      spec.family);
  OperatorMatrix w = base.scaled(spec.scale);
  if (spec.lifted) w = lift_witness(w, budget);
  return w;
}

double witness_value(const WitnessSpec& spec, const DensityMatrix& rho) {
  check_box(spec);
  const double v = std::visit(
      overloaded{
          [&](const DisplacedParity& dp) { return -WignerEvaluator(rho, kDisplacementGuard, std::max(std::abs(dp.alpha), 1e-3)).displaced_parity(dp.alpha);
          },
          [&](const PureProjector& p) {
            require_same(p.psi.cutoff(), rho.cutoff(), "witness_value");
            const double l = require_lambda(p.lambda);
            return p.psi.amplitudes().dot(rho.matrix() * p.psi.amplitudes()).real() - l;
          },
          [&](const TwoCopyProjector& p) {
            require_same(p.psi.cutoff(), rho.cutoff(), "witness_value");
            const double l = require_lambda(p.lambda);
            // Tr(|psi psi><psi psi| rho (x) rho) = <psi|rho|psi>^2
            const double f = p.psi.amplitudes().dot(rho.matrix() * p.psi.amplitudes()).real();
            return f * f - l * l;
          },
          [&](const ExplicitWitness& e) {
            if (!e.on_two_copies) {
              if (e.op.dim() != rho.dim()) throw DimensionError("explicit witness dimension mismatch");
              return -rho.expectation(e.op.matrix());
            }
            const DensityMatrix pair = tensor(rho, rho);
            if (e.op.dim() != pair.dim()) throw DimensionError("explicit witness dimension mismatch");
            return -pair.expectation(e.op.matrix());
          },
      },
      spec.family);
  // A lifted witness has the same value on rho (x) rho as on rho.
  return spec.scale * v;
}

OperatorMatrix rescale_to_box(const OperatorMatrix& w, const WitnessBox& box) {
  box.validate();
  if (!w.is_hermitian()) throw PreconditionError("rescale_to_box needs a Hermitian operator");
  if (!(w.norm_bound() > 0.0) || !std::isfinite(w.norm_bound())) {
    throw PreconditionError("cannot rescale a zero or unbounded operator");
  }
  return w.scaled(box.min_side() / w.norm_bound());
}

WitnessSpec rescale_to_box(WitnessSpec spec) {
  spec.box.validate();
  const double norm = family_norm(spec.family);
  if (!(norm > 0.0)) throw PreconditionError("cannot rescale a zero witness");
  spec.scale = spec.box.min_side() / norm;
  return spec;
}

// ------------------------------------------------------- Gaussian fidelity

double gaussian_overlap(const PureState& psi, const GaussianPureParams& p) {
  const Vector g = gaussian_pure_amplitudes(p, psi.dim());
  return std::norm(psi.amplitudes().dot(g));
}

namespace {

// Start from the Gaussian state with the same first and second moments.
GaussianPureParams moment_matched(const PureState& psi) {
  const auto ops = ladder_ops(psi.cutoff());
  const Vector& v = psi.amplitudes();
  const Matrix& a = ops.a.matrix();
  const Complex ma = v.dot(a * v);
  const Complex ma2 = v.dot(a * (a * v)) - ma * ma;
  const double mn = v.dot(ops.n.matrix() * v).real() - std::norm(ma);
  // For a pure squeezed state: <a^2>_c = -e^{i phi} sinh r cosh r, <n>_c = sinh^2 r.
  const double r = std::asinh(std::sqrt(std::max(mn, 0.0)));
  const double phi = std::abs(ma2) > 1e-12 ? std::arg(-ma2) : 0.0;
  return {ma, std::min(r, 1.5), phi};
}

}  // namespace

GaussianFidelityResult gaussian_fidelity(const PureState& psi, const GaussianFidelityConfig& cfg) {
  if (psi.leakage() > 1e-6) throw TruncationError("gaussian_fidelity: state leakage above 1e-6");
  if (cfg.starts < 1 || cfg.seeds.empty()) throw ConfigError("gaussian_fidelity needs starts and seeds");

  auto params_of = [&](std::span<const double> x) {
    return GaussianPureParams{Complex(x[0], x[1]), std::min(std::abs(x[2]), cfg.r_max), x[3]};
  };
  auto objective = [&](std::span<const double> x) {
    const double v = gaussian_overlap(psi, params_of(x));
    return std::isfinite(v) ? -v : 1.0;
  };

  std::vector<std::array<double, 4>> starts;
  const auto mm = moment_matched(psi);
  starts.push_back({mm.alpha.real(), mm.alpha.imag(), mm.r, mm.phi});
  std::mt19937_64 rng(cfg.seeds.front());
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  const double mags[] = {0.0, 0.6, 1.2, 1.8};
  const double sqz[] = {0.0, 0.4, 0.8, 1.2};
  for (int k = 1; k < cfg.starts; ++k) {
    rng.seed(cfg.seeds[static_cast<std::size_t>(k) % cfg.seeds.size()] + 0x9e3779b97f4a7c15ULL * k);
    const double mag = mags[(k - 1) % 4] + jitter(rng);
    const double r = sqz[((k - 1) / 4) % 4] + jitter(rng);
    const double th = 2.0 * std::numbers::pi * (k * 0.6180339887498949) + jitter(rng);
    const double phi = 2.0 * th + std::numbers::pi * (k % 2) + jitter(rng);
    starts.push_back({mag * std::cos(th), mag * std::sin(th), std::abs(r), phi});
  }

  NelderMeadOptions opt;
  opt.f_tol = cfg.f_tol;
  opt.max_iter = cfg.max_iter;
  opt.step = {0.3, 0.3, 0.2, 0.5};

  GaussianFidelityResult res;
  double best = -1.0;
  double worst = 2.0;
  for (const auto& s : starts) {
    auto r = nelder_mead(objective, {s.begin(), s.end()}, opt);
    // One restart from the end point to escape a collapsed simplex.
    opt.step = {0.05, 0.05, 0.05, 0.1};
    auto r2 = nelder_mead(objective, r.x, opt);
    opt.step = {0.3, 0.3, 0.2, 0.5};
    if (r2.f <= r.f) r = r2;
    const double val = -r.f;
    if (!std::isfinite(val)) continue;
    if (r.converged) ++res.starts_converged;
    worst = std::min(worst, val);
    if (val > best + 1e-15) {
      best = val;
      res.argmax = params_of(r.x);
    }
  }
  if (best < 0.0) throw TruncationError("gaussian_fidelity: every start failed");
  auto& a = res.argmax;
  a.phi = std::fmod(a.phi, 2.0 * std::numbers::pi);
  if (a.phi < 0) a.phi += 2.0 * std::numbers::pi;
  res.lambda_g = std::clamp(best, 0.0, 1.0);
  res.multistart_spread = best - worst;
  return res;
}

}  // namespace cvwit
