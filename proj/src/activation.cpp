#include "cvwit/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cvwit/errors.hpp"

namespace cvwit {

namespace {

constexpr double kCrossCheckTol = 1e-9;

Eigen::Matrix4cd singlet_projector() {
  Eigen::Vector4cd s(0.0, 1.0, -1.0, 0.0);
  s /= std::sqrt(2.0);
  return s * s.adjoint();
}

double q_from_singlet_fraction(double p, ActivationChannel c) {
  return c == ActivationChannel::Entanglement ? (4.0 * p - 1.0) / 3.0 : p;
}

void fill_measures(ActivationOutcome& o) {
  const double q = o.werner.q();
  o.entanglement = std::max(0.0, (3.0 * q - 1.0) / 4.0);
  o.steering = std::max(0.0, 2.0 * q - 1.0);
  o.discord = 0.5 * q * q;
  o.chsh = std::max(0.0, 2.0 * std::numbers::sqrt2 * q - 2.0);
  o.classification = classify(q);
}

void cross_check(ActivationOutcome& o, const Eigen::Matrix4cd& out) {
  o.pt_negativity = pt_negativity(out);
  if (std::abs(o.pt_negativity - o.entanglement) > kCrossCheckTol) {
    std::ostringstream os;
    os << "entanglement " << o.entanglement << " disagrees with partial-transpose negativity " << o.pt_negativity;
    throw InvariantError(os.str());
  }
}

ActivationOutcome activate(const DensityMatrix& rho, const WitnessSpec& spec, ActivationChannel c) {
  const auto [lo, hi] = witness_spectrum(spec);
  if (lo < -1.0 - 1e-9 || hi > 1.0 + 1e-9) throw BoxViolation("activation needs a witness inside [-1, 1]");
  const double violation = witness_value(spec, rho);  // -Tr(W rho)
  const double p = std::clamp(0.5 * (1.0 + violation), 0.0, 1.0);  // Tr(M- rho)
  const Eigen::Matrix4cd psi = singlet_projector();
  const Eigen::Matrix4cd rest =
      c == ActivationChannel::Entanglement ? Eigen::Matrix4cd((Eigen::Matrix4cd::Identity() - psi) / 3.0)
                                           : Eigen::Matrix4cd(Eigen::Matrix4cd::Identity() / 4.0);
  const Eigen::Matrix4cd out = p * psi + (1.0 - p) * rest;

  ActivationOutcome o;
  o.werner = WernerState(q_from_singlet_fraction(p, c));
  o.channel = c;
  o.witness_violation = violation;
  o.witness = spec.describe();
  fill_measures(o);
  cross_check(o, out);
  o.discord_bruteforce = geometric_discord_bruteforce(out);
  return o;
}

}  // namespace

WernerState::WernerState(double q) : q_(q) {
  if (!(q >= -1.0 / 3.0 - 1e-12 && q <= 1.0 + 1e-12)) {
    throw PreconditionError("Werner parameter q=" + std::to_string(q) + " outside [-1/3, 1]");
  }
  q_ = std::clamp(q, -1.0 / 3.0, 1.0);
}

Eigen::Matrix4cd WernerState::matrix() const {
  return q_ * singlet_projector() + (1.0 - q_) * Eigen::Matrix4cd::Identity() / 4.0;
}

std::string_view to_string(Correlation c) {
  switch (c) {
    case Correlation::Separable: return "separable";
    case Correlation::EntangledUnsteerable: return "entangled_unsteerable";
    case Correlation::SteerableCHSHLocal: return "steerable_chsh_local";
    case Correlation::BellNonlocal: return "bell_nonlocal";
  }
  return "separable";
}

Correlation classify(double q) {
  // Roundoff slack so a witness value that is zero up to 1e-16 stays on the closed side.
  constexpr double slack = 1e-12;
  if (q <= 1.0 / 3.0 + slack) return Correlation::Separable;
  if (q <= 0.5 + slack) return Correlation::EntangledUnsteerable;
  if (q <= 1.0 / std::numbers::sqrt2 + slack) return Correlation::SteerableCHSHLocal;
  return Correlation::BellNonlocal;
}

std::string_view to_string(ActivationChannel c) {
  switch (c) {
    case ActivationChannel::Entanglement: return "entanglement";
    case ActivationChannel::Steering: return "steering";
    case ActivationChannel::None: return "none";
  }
  return "none";
}

std::pair<OperatorMatrix, OperatorMatrix> povm_from_witness(const OperatorMatrix& w) {
  if (!w.is_hermitian()) throw PreconditionError("POVM needs a Hermitian witness");
  const auto ev = eigh(w.matrix()).values;
  if (ev(0) < -1.0 - 1e-9 || ev(ev.size() - 1) > 1.0 + 1e-9) {
    throw BoxViolation("witness eigenvalues leave [-1, 1]");
  }
  const Matrix id = Matrix::Identity(w.dim(), w.dim());
  Matrix plus = 0.5 * (id + w.matrix());
  // M- = I - M+ keeps the sum exactly the identity.
  Matrix minus = id - plus;
  return {OperatorMatrix(std::move(plus), true, 0.5 * (1.0 + std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))))),
          OperatorMatrix(std::move(minus), true, 0.5 * (1.0 + std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)))))};
}

ActivationOutcome activate_entanglement(const DensityMatrix& rho, const WitnessSpec& spec) {
  return activate(rho, spec, ActivationChannel::Entanglement);
}

ActivationOutcome activate_steering(const DensityMatrix& rho, const WitnessSpec& spec) {
  return activate(rho, spec, ActivationChannel::Steering);
}

double discord_threshold(ActivationChannel c) { return c == ActivationChannel::Steering ? 1.0 / 8.0 : 1.0 / 18.0; }

bool discord_certificate(const ActivationOutcome& o) { return o.discord > discord_threshold(o.channel) + 1e-12; }

ActivationOutcome werner_analytics(double q) {
  ActivationOutcome o;
  o.werner = WernerState(q);
  fill_measures(o);
  const Eigen::Matrix4cd m = o.werner.matrix();
  o.pt_negativity = pt_negativity(m);
  if (std::abs(o.pt_negativity - o.entanglement) > 1e-10) {
    throw InvariantError("closed-form Werner entanglement disagrees with partial transpose");
  }
  o.discord_bruteforce = geometric_discord_bruteforce(m);
  return o;
}

double pt_negativity(const Eigen::Matrix4cd& rho) {
  // Basis |ab> -> index 2a + b; transpose the b indices.
  Eigen::Matrix4cd pt;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) pt(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (int i = 0; i < 4; ++i) neg += std::max(0.0, -es.eigenvalues()(i));
  return neg;
}

double geometric_discord_bruteforce(const Eigen::Matrix4cd& rho, int polar_steps, int azimuth_steps) {
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  for (int i = 0; i <= polar_steps; ++i) {
    const double th = std::numbers::pi * i / polar_steps;
    for (int j = 0; j < azimuth_steps; ++j) {
      const double ph = 2.0 * std::numbers::pi * j / azimuth_steps;
      const Eigen::Matrix2cd nsig =
          std::sin(th) * std::cos(ph) * sx + std::sin(th) * std::sin(ph) * sy + std::cos(th) * sz;
      Eigen::Matrix4cd measured = Eigen::Matrix4cd::Zero();
      for (int s : {1, -1}) {
        const Eigen::Matrix2cd pa = 0.5 * (id + static_cast<double>(s) * nsig);
        Eigen::Matrix4cd p;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
              for (int d = 0; d < 2; ++d) p(2 * a + c, 2 * b + d) = pa(a, b) * id(c, d);
        measured += p * rho * p;
      }
      best = std::min(best, (rho - measured).squaredNorm());
      if (i == 0 || i == polar_steps) break;  // poles: azimuth irrelevant
    }
  }
  return best;
}

}  // namespace cvwit
