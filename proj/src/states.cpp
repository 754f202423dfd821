#include "cvwit/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cvwit/errors.hpp"
#include "cvwit/quadrature.hpp"

namespace cvwit {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

void guard_leak(double leak, double guard, std::string_view what) {
  if (leak > guard) {
    throw TruncationError(std::string(what) + ": mass " + std::to_string(leak) + " above cutoff exceeds guard " +
                          std::to_string(guard));
  }
}

}  // namespace

std::string_view to_string(GkpLogical l) {
  switch (l) {
    case GkpLogical::Zero: return "zero";
    case GkpLogical::One: return "one";
    case GkpLogical::Plus: return "plus";
    case GkpLogical::Minus: return "minus";
  }
  return "zero";
}

GkpLogical parse_gkp_logical(std::string_view s) {
  if (s == "zero" || s == "0") return GkpLogical::Zero;
  if (s == "one" || s == "1") return GkpLogical::One;
  if (s == "plus" || s == "+") return GkpLogical::Plus;
  if (s == "minus" || s == "-") return GkpLogical::Minus;
  throw ConfigError("unknown GKP logical state '" + std::string(s) + "'");
}

double gkp_squeezing_db(double epsilon) {
  if (!(epsilon > 0.0)) throw PreconditionError("GKP epsilon must be positive");
  return -10.0 * std::log10(std::tanh(epsilon));
}

double gkp_epsilon_from_db(double db) {
  if (!(db > 0.0)) throw PreconditionError("GKP squeezing must be positive in dB");
  return std::atanh(std::pow(10.0, -db / 10.0));
}

PureState fock(int n, FockCutoff cutoff) {
  if (n < 0 || n >= cutoff.dim()) {
    throw TruncationError("Fock level " + std::to_string(n) + " outside cutoff " + std::to_string(cutoff.dim()));
  }
  Vector v = Vector::Zero(cutoff.dim());
  v(n) = 1.0;
  return PureState(std::move(v));
}

PureState coherent(Complex alpha, FockCutoff cutoff, double guard) {
  const double mean = std::norm(alpha);
  const double leak = coherent_tail(mean, cutoff.dim());
  guard_leak(leak, guard, "coherent");
  const int d = cutoff.dim();
  Vector v(d);
  const double r = std::abs(alpha);
  const double th = std::arg(alpha);
  for (int n = 0; n < d; ++n) {
    if (r == 0.0) {
      v(n) = n == 0 ? 1.0 : 0.0;
      continue;
    }
    const double logmag = -0.5 * mean + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
    v(n) = std::polar(std::exp(logmag), n * th);
  }
  return PureState(std::move(v), leak);
}

Vector gaussian_pure_amplitudes(const GaussianPureParams& p, int dim, double* captured) {
  const Complex a = p.alpha;
  const double t = std::tanh(p.r);
  const Complex et = std::polar(t, p.phi);  // e^{i phi} tanh r
  const Complex beta = a + std::conj(a) * et;
  Vector c(dim);
  c(0) = std::exp(-0.5 * std::norm(a) - 0.5 * std::conj(a) * std::conj(a) * et) / std::sqrt(std::cosh(p.r));
  if (dim > 1) c(1) = beta * c(0);
  for (int n = 1; n + 1 < dim; ++n) {
    c(n + 1) = (beta * c(n) - et * std::sqrt(static_cast<double>(n)) * c(n - 1)) / std::sqrt(n + 1.0);
  }
  if (captured) *captured = c.squaredNorm();
  return c;
}

PureState gaussian_pure(const GaussianPureParams& p, FockCutoff cutoff, double guard, double r_max) {
  if (p.r < 0.0 || p.r > r_max) {
    throw PreconditionError("squeezing r=" + std::to_string(p.r) + " outside [0, " + std::to_string(r_max) + "]");
  }
  double captured = 0.0;
  Vector c = gaussian_pure_amplitudes(p, cutoff.dim(), &captured);
  const double leak = std::max(0.0, 1.0 - captured);
  guard_leak(leak, guard, "gaussian_pure");
  return PureState(std::move(c), leak);
}

PureState cat(Complex alpha, int sign, FockCutoff cutoff, double guard) {
  if (sign != 1 && sign != -1) throw PreconditionError("cat sign must be +1 or -1");
  const double leak = coherent_tail(std::norm(alpha), cutoff.dim());
  guard_leak(leak, guard, "cat");
  const int d = cutoff.dim();
  const int n0 = sign == 1 ? 0 : 1;
  // Amplitudes alpha^(n-n0)/sqrt(n!) on the matching parity sector; the common
  // factor alpha^n0 is dropped so alpha -> 0 gives the limiting Fock state.
  Vector v = Vector::Zero(d);
  Complex term = 1.0;
  const Complex a2 = alpha * alpha;
  for (int n = n0; n < d; n += 2) {
    if (n >= 2) term *= a2 / std::sqrt(static_cast<double>(n) * (n - 1));
    v(n) = term;
  }
  return PureState(std::move(v), leak);
}

PureState photon_subtracted_squeezed(double r, FockCutoff cutoff, double guard, double r_max) {
  if (r == 0.0) throw PreconditionError("photon subtraction from vacuum gives the zero vector");
  if (r < 0.0 || r > r_max) throw PreconditionError("squeezing r outside [0, r_max]");
  const int d = cutoff.dim();
  const Vector sq = gaussian_pure_amplitudes({0.0, r, 0.0}, d + 1);
  Vector v(d);
  double captured = 0.0;
  for (int n = 0; n < d; ++n) {
    v(n) = std::sqrt(n + 1.0) * sq(n + 1);
    captured += std::norm(v(n));
  }
  const double sh = std::sinh(r);
  const double leak = std::max(0.0, 1.0 - captured / (sh * sh));
  guard_leak(leak, guard, "photon_subtracted_squeezed");
  return PureState(std::move(v), leak);
}

namespace {

struct Peak {
  double position;
  double weight;
};

std::vector<Peak> gkp_peaks(GkpLogical l, int window) {
  std::vector<Peak> out;
  switch (l) {
    case GkpLogical::Zero:
      for (int s = -window; s <= window; ++s) out.push_back({2.0 * s * kSqrtPi, 1.0});
      break;
    case GkpLogical::One:
      for (int s = -window - 1; s <= window; ++s) out.push_back({(2.0 * s + 1.0) * kSqrtPi, 1.0});
      break;
    case GkpLogical::Plus:
      for (int s = -window; s <= window; ++s) out.push_back({s * kSqrtPi, 1.0});
      break;
    case GkpLogical::Minus:
      for (int s = -window; s <= window; ++s) out.push_back({s * kSqrtPi, (s % 2 == 0) ? 1.0 : -1.0});
      break;
  }
  return out;
}

// Fock coefficients of the damped comb on levels < hermite.cols(), unnormalized.
// The damped peak e^{-eps n}|q=y> has position wavefunction proportional to
// exp(-(coth eps / 2)(x - y / cosh eps)^2 - tanh(eps) y^2 / 2).
Eigen::VectorXd project_comb(double eps, GkpLogical l, int window, const GaussHermiteRule& rule,
                             const Eigen::MatrixXd& hermite) {
  const double half_coth = 0.5 / std::tanh(eps);
  const double sech = 1.0 / std::cosh(eps);
  const double th = std::tanh(eps);
  const auto peaks = gkp_peaks(l, window);
  Eigen::VectorXd f(rule.nodes.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double x = rule.nodes(i);
    double acc = 0.0;
    for (const auto& pk : peaks) {
      const double dx = x - pk.position * sech;
      acc += pk.weight * std::exp(-half_coth * dx * dx - 0.5 * th * pk.position * pk.position);
    }
    f(i) = acc * rule.scaled_weights(i);
  }
  return hermite.transpose() * f;
}

double max_diff_normalized(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a / a.norm() - b / b.norm()).cwiseAbs().maxCoeff();
}

constexpr double kWindowTol = 1e-8;
constexpr int kMaxWindow = 400;

struct CombProjector {
  GaussHermiteRule rule;
  Eigen::MatrixXd hermite;

  explicit CombProjector(int levels) : rule(gauss_hermite(4 * levels)), hermite(hermite_functions(rule.nodes, levels)) {}

  int auto_window(double eps, GkpLogical l) const {
    std::vector<Eigen::VectorXd> by_window;
    for (int s = 1; s <= kMaxWindow + 2; ++s) {
      by_window.push_back(project_comb(eps, l, s, rule, hermite));
      if (s >= 3 && max_diff_normalized(by_window[s - 3], by_window[s - 1]) < kWindowTol) return s - 2;
    }
    throw PreconditionError("GKP peak window did not converge");
  }
};

}  // namespace

int gkp_auto_window(double epsilon, GkpLogical logical) {
  if (!(epsilon > 0.0)) throw PreconditionError("GKP epsilon must be positive");
  // A coarse projection is enough to decide convergence of the comb sum.
  const int levels = std::max(40, static_cast<int>(std::ceil(8.0 / epsilon)));
  return CombProjector(std::min(levels, 600)).auto_window(epsilon, logical);
}

PureState gkp_damped(const GkpParams& p, FockCutoff cutoff, double tail_guard) {
  if (!(p.epsilon > 0.0)) throw PreconditionError("GKP epsilon must be positive");
  if (p.peak_window < 0) throw PreconditionError("GKP peak window must be nonnegative");
  const int n = cutoff.dim();
  const int n_ext = n + std::max(20, n / 4);
  const CombProjector proj(n_ext);

  int window = p.peak_window;
  if (window == 0) {
    window = proj.auto_window(p.epsilon, p.logical);
  }
  Eigen::VectorXd c = project_comb(p.epsilon, p.logical, window, proj.rule, proj.hermite);
  if (p.peak_window != 0) {
    const Eigen::VectorXd wider = project_comb(p.epsilon, p.logical, window + 2, proj.rule, proj.hermite);
    const double diff = max_diff_normalized(c, wider);
    if (diff >= kWindowTol) {
      throw PreconditionError("GKP peak window " + std::to_string(window) + " not converged (change " +
                              std::to_string(diff) + " under S -> S+2)");
    }
  }
  const double total = c.squaredNorm();
  if (!(total > 0.0)) throw InvariantError("GKP projection vanished");
  const double tail = c.tail(n_ext - n).squaredNorm() / total;
  if (tail > tail_guard) {
    throw TruncationError("GKP codeword at epsilon=" + std::to_string(p.epsilon) + " has tail mass " +
                          std::to_string(tail) + " above cutoff " + std::to_string(n));
  }
  return PureState(c.head(n).cast<Complex>(), tail);
}

int gkp_required_cutoff(double epsilon, double tail_guard) {
  if (!(epsilon > 0.0)) throw PreconditionError("GKP epsilon must be positive");
  // Probe with a generous projection and read off where the tail drops below
  // the guard, then confirm with the real constructor.
  int probe = std::max(48, static_cast<int>(std::ceil(10.0 / epsilon)));
  for (;;) {
    const CombProjector proj(probe);
    const int window = proj.auto_window(epsilon, GkpLogical::Zero);
    const Eigen::VectorXd c = project_comb(epsilon, GkpLogical::Zero, window, proj.rule, proj.hermite);
    const double total = c.squaredNorm();
    double tail = 0.0;
    int need = probe;
    for (int k = probe - 1; k >= 2; --k) {
      tail += c(k) * c(k) / total;
      if (tail > 0.5 * tail_guard) {
        need = k + 1;
        break;
      }
    }
    if (need < (probe * 4) / 5) {
      need = std::max(need, 2);
      for (;; need += 4) {
        try {
          gkp_damped({epsilon, GkpLogical::Zero, window}, FockCutoff(need), tail_guard);
          return need;
        } catch (const TruncationError&) {
        }
      }
    }
    probe *= 2;
  }
}

DensityMatrix thermal(double mean_photons, FockCutoff cutoff) {
  if (mean_photons < 0.0) throw PreconditionError("thermal mean photon number must be nonnegative");
  const int d = cutoff.dim();
  Matrix m = Matrix::Zero(d, d);
  const double ratio = mean_photons / (mean_photons + 1.0);
  double pn = 1.0 / (mean_photons + 1.0);
  double total = 0.0;
  for (int k = 0; k < d; ++k) {
    m(k, k) = pn;
    total += pn;
    pn *= ratio;
  }
  m /= total;
  return DensityMatrix(m, 1.0 - total);
}

}  // namespace cvwit
