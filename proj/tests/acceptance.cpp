// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cvwit/activation.hpp"
#include "cvwit/channels.hpp"
#include "cvwit/commands.hpp"
#include "cvwit/errors.hpp"
#include "cvwit/monotones.hpp"
#include "cvwit/phase_space.hpp"
#include "cvwit/states.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cvwit;
using namespace cvwit::testing;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

const WitnessSpec kParity{DisplacedParity{0.0}, {1.0, 1.0}, FreeSet::WignerPositive, 1.0, false};

std::vector<double> eta_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
  return g;
}

DensityMatrix lossy_photon(double eta, int cutoff = 25) { return apply_loss(fock(1, FockCutoff(cutoff)).density(), {eta}); }

void loss_threshold(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double eta : eta_grid()) {
    const auto rho = lossy_photon(eta);
    const auto b = lower_bound(rho, {}, FreeSet::WignerPositive);
    const double expect = std::max(0.0, 2.0 * eta - 1.0);
    const WitnessSpec w = b.lower > 0.0 ? *b.witness_used : kParity;
    const auto e = activate_entanglement(rho, w);
    const auto s = activate_steering(rho, w);
    worst = std::max({worst, std::abs(b.lower - expect), std::abs(e.entanglement - expect / 2.0),
                      std::abs(s.steering - expect)});
    o.require(std::abs(b.lower - expect) <= 1e-6, "bound at eta=" + std::to_string(eta));
    o.require(std::abs(e.entanglement - expect / 2.0) <= 1e-6, "E at eta=" + std::to_string(eta));
    o.require(std::abs(s.steering - expect) <= 1e-6, "S at eta=" + std::to_string(eta));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < 10.0, "runtime");
  o.detail << "max deviation " << worst << ", " << secs << " s";
}

void wigner_minima(Outcome& o) {
  double worst = 0.0;
  for (double eta : eta_grid()) {
    const auto rho = lossy_photon(eta);
    const WignerEvaluator eval(rho);
    const double expect = 2.0 / kPi * (1.0 - 2.0 * eta);
    const double at_origin = eval.wigner(0.0);
    worst = std::max(worst, std::abs(at_origin - expect));
    o.require(std::abs(at_origin - expect) <= 1e-5, "W(0) at eta=" + std::to_string(eta));
    // Global minimum over the plane: grid scan plus the refined search.
    const auto grid = wigner_grid(rho, 0.0, 40);
    double global = *std::min_element(grid.values.begin(), grid.values.end());
    const auto d = negativity_depth(rho);
    global = std::min(global, kWignerScale * d.min_parity);
    worst = std::max(worst, std::abs(global - expect));
    o.require(std::abs(global - expect) <= 1e-5, "global min at eta=" + std::to_string(eta) + " is " +
                                                     std::to_string(global) + ", expected " + std::to_string(expect));
  }
  o.detail << "max deviation " << worst;
}

void fock_n_parity(Outcome& o) {
  double worst = 0.0;
  const FockCutoff c(25);
  for (int n = 1; n <= 4; ++n) {
    for (double eta : {0.2, 0.5, 0.8}) {
      const auto rho = apply_loss(fock(n, c).density(), {eta});
      const double got = rho.expectation(parity_op(c).matrix());
      const double expect = std::pow(1.0 - 2.0 * eta, n);
      worst = std::max(worst, std::abs(got - expect));
      o.require(std::abs(got - expect) <= 1e-7, "n=" + std::to_string(n) + " eta=" + std::to_string(eta));
    }
  }
  o.detail << "max deviation " << worst;
}

void odd_parity(Outcome& o) {
  const FockCutoff c(40);
  const std::vector<std::pair<std::string, PureState>> states{
      {"fock1", fock(1, c)},
      {"cat1", cat(1.0, -1, c)},
      {"cat2", cat(2.0, -1, c)},
      {"photon_subtracted_0.5", photon_subtracted_squeezed(0.5, c)}};
  for (const auto& [name, psi] : states) {
    const auto rho = psi.density();
    for (auto fs : {FreeSet::WignerPositive, FreeSet::ConvexGaussianHull, FreeSet::GaussianTwoCopy}) {
      const auto b = lower_bound(rho, {}, fs);
      o.require(std::abs(b.lower - 1.0) <= 1e-9 && b.exact, name + " " + std::string(to_string(fs)));
    }
    const auto e = activate_entanglement(rho, kParity);
    const auto s = activate_steering(rho, kParity);
    o.require(std::abs(e.entanglement - 0.5) <= 1e-9, name + " E");
    o.require(std::abs(s.steering - 1.0) <= 1e-9, name + " S");
  }
  o.detail << states.size() << " states, three free sets";
}

void activation_exactness(Outcome& o) {
  double worst = 0.0;
  for_all(100, 20240917, [&](std::mt19937_64& g, int i) {
    const int d = uniform_int(g, 2, 10);
    const auto rho = random_density(g, d, uniform_int(g, 1, d));
    const Matrix h = random_hermitian(g, d, -1.0, 1.0);
    const WitnessSpec w{ExplicitWitness{OperatorMatrix::hermitian(h), FreeSet::WignerPositive, "random", false},
                        {1.0, 1.0}, FreeSet::WignerPositive, 1.0, false};
    const double v = std::max(0.0, -rho.expectation(h));
    const auto e = activate_entanglement(rho, w);  // internally cross-checked against partial transpose
    const auto s = activate_steering(rho, w);
    const double dev = std::max({std::abs(e.entanglement - v / 2.0), std::abs(e.pt_negativity - v / 2.0),
                                 std::abs(s.steering - v)});
    worst = std::max(worst, dev);
    o.require(dev <= 1e-9, "pair " + std::to_string(i));
  });
  o.detail << "100 pairs, max deviation " << worst;
}

/// Largest CHSH value over measurement settings, 2 sqrt(sum of the two largest eigenvalues of T^T T).
double chsh_horodecki(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix2cd s[3];
  s[0] << 0, 1, 1, 0;
  s[1] << 0, Complex(0, -1), Complex(0, 1), 0;
  s[2] << 1, 0, 0, -1;
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Eigen::Matrix4cd k;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) k.block<2, 2>(2 * a, 2 * b) = s[i](a, b) * s[j];
      t(i, j) = (rho * k).trace().real();
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t);
  return 2.0 * std::sqrt(es.eigenvalues()(1) + es.eigenvalues()(2));
}

void werner(Outcome& o) {
  double e_dev = 0.0, d_dev = 0.0, n_dev = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double q = -1.0 / 3.0 + (4.0 / 3.0) * i / 49.0;
    const auto a = werner_analytics(q);
    const auto m = a.werner.matrix();
    e_dev = std::max(e_dev, std::abs(pt_negativity(m) - a.entanglement));
    d_dev = std::max(d_dev, std::abs(geometric_discord_bruteforce(m) - a.discord));
    n_dev = std::max(n_dev, std::abs(std::max(0.0, chsh_horodecki(m) - 2.0) - a.chsh));
    o.require(std::abs(a.steering - std::max(0.0, 2.0 * q - 1.0)) <= 1e-12, "S closed form");
  }
  o.require(e_dev <= 1e-10, "E vs partial transpose");
  o.require(d_dev <= 1e-4, "D vs brute-force discord");
  o.require(n_dev <= 1e-10, "N vs Horodecki CHSH");
  const double bounds[] = {1.0 / 3.0, 0.5, 1.0 / std::numbers::sqrt2};
  const Correlation below[] = {Correlation::Separable, Correlation::EntangledUnsteerable,
                               Correlation::SteerableCHSHLocal};
  const Correlation above[] = {Correlation::EntangledUnsteerable, Correlation::SteerableCHSHLocal,
                               Correlation::BellNonlocal};
  for (int k = 0; k < 3; ++k) {
    o.require(classify(bounds[k]) == below[k], "class at boundary " + std::to_string(k));
    o.require(classify(bounds[k] + 1e-9) == above[k], "class above boundary " + std::to_string(k));
  }
  // The measures switch on exactly at the boundaries.
  o.require(werner_analytics(1.0 / 3.0).entanglement == 0.0 && werner_analytics(1.0 / 3.0 + 1e-6).entanglement > 0.0,
            "E onset");
  o.require(werner_analytics(0.5).steering == 0.0 && werner_analytics(0.5 + 1e-6).steering > 0.0, "S onset");
  o.require(werner_analytics(1.0 / std::numbers::sqrt2).chsh <= 1e-15 &&
                werner_analytics(1.0 / std::numbers::sqrt2 + 1e-6).chsh > 0.0,
            "N onset");
  o.detail << "E dev " << e_dev << ", D dev " << d_dev << ", N dev " << n_dev;
}

void boundary_mixing(Outcome& o) {
  const FockCutoff c(25);
  const auto sigma = mix(0.5, fock(0, c).density(), fock(1, c).density());
  const auto tau = fock(1, c).density();
  const auto pts = exact_boundary_mixture(sigma, tau, parity_op(c), {0.0, 0.25, 0.5, 0.75, 1.0});
  double worst = 0.0;
  for (const auto& p : pts) {
    worst = std::max({worst, std::abs(p.exact - p.t), std::abs(p.searched_lower - p.t)});
    o.require(std::abs(p.exact - p.t) <= 1e-6 && std::abs(p.searched_lower - p.t) <= 1e-6,
              "t=" + std::to_string(p.t));
  }
  o.detail << "max deviation " << worst;
}

void pure_bounds(Outcome& o) {
  const FockCutoff c(40);
  const double vac = gaussian_fidelity(fock(0, c)).lambda_g;
  const double coh = gaussian_fidelity(coherent(Complex(0.9, -0.6), c)).lambda_g;
  o.require(std::abs(vac - 1.0) <= 1e-6, "vacuum");
  o.require(std::abs(coh - 1.0) <= 1e-6, "coherent");
  const double oracle = one_photon_gaussian_fidelity_grid();
  const auto one = pure_state_bounds(fock(1, c));
  o.require(std::abs(one.lambda_g - oracle) <= 1e-4, "one photon vs grid oracle");
  double floor_dev = 0.0;
  for (const auto& psi : {fock(1, c), fock(2, c), cat(1.5, -1, c), cat(1.0, 1, c), photon_subtracted_squeezed(0.5, c)}) {
    const auto b = pure_state_bounds(psi);
    const double dev = std::abs(b.sng_lower - (1.0 - (1.0 - b.gng_lower) * (1.0 - b.gng_lower)));
    floor_dev = std::max(floor_dev, dev);
    o.require(dev <= 1e-9, "floor identity");
  }
  o.detail << "Lambda_G(|1>) " << one.lambda_g << " vs oracle " << oracle << ", floor dev " << floor_dev;
}

std::vector<DensityMatrix> hierarchy_corpus(FockCutoff c) {
  std::vector<DensityMatrix> out;
  for (double eta : {0.3, 0.55, 0.7, 0.85, 1.0}) out.push_back(apply_loss(fock(1, c).density(), {eta}));
  for (int n : {2, 3}) out.push_back(apply_loss(fock(n, c).density(), {0.8}));
  for (double a : {0.5, 1.0, 1.5}) {
    out.push_back(cat(a, -1, c).density());
    out.push_back(cat(a, +1, c).density());
  }
  out.push_back(apply_loss(cat(1.2, -1, c).density(), {0.7}));
  for (auto l : {GkpLogical::Zero, GkpLogical::Plus}) {
    out.push_back(gkp_damped({0.35, l, 0}, c).density());
    out.push_back(apply_loss(gkp_damped({0.35, l, 0}, c).density(), {0.9}));
  }
  out.push_back(mix(0.5, fock(0, c).density(), fock(1, c).density()));
  out.push_back(mix(0.3, fock(2, c).density(), cat(1.0, -1, c).density()));
  out.push_back(mix(0.6, thermal(0.2, c), fock(1, c).density()));
  out.push_back(photon_subtracted_squeezed(0.5, c).density());
  out.push_back(coherent(Complex(0.5, 0.5), c).density());
  return out;
}

void hierarchy(Outcome& o) {
  const FockCutoff c(30);
  const auto corpus = hierarchy_corpus(c);
  int ok = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      const auto h = hierarchy_check(corpus[i]);
      worst = std::max({worst, h.wn.lower - h.gng.lower, h.gng.lower - h.sng.lower});
      ++ok;
    } catch (const InvariantError& e) {
      o.require(false, "state " + std::to_string(i) + ": " + e.what());
    }
  }
  o.require(corpus.size() >= 20, "corpus size");
  o.detail << ok << "/" << corpus.size() << " states ordered, max violation " << worst;
}

void gkp_figure(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  cli::GkpSweepConfig cfg;
  cfg.db = {4.0, 6.5, 9.0, 11.5, 14.0, 17.0};
  cfg.eta = 0.9;
  const auto rows = cli::gkp_sweep(cfg);
  int top_cutoff = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    top_cutoff = std::max(top_cutoff, r.cutoff);
    std::printf("    %5.1f dB  eps %.4f  cutoff %3d  E_in %.6f  E_out %.6f  infidelity %.6f\n", r.db, r.epsilon,
                r.cutoff, r.e_in, r.e_out, r.infidelity);
    o.require(r.e_out <= r.e_in + 1e-12, "(b) E_out <= E_in at " + std::to_string(r.db) + " dB");
    if (i > 0) {
      o.require(r.e_in >= rows[i - 1].e_in - 1e-9, "(a) E_in nondecreasing at " + std::to_string(r.db) + " dB");
      o.require(r.infidelity <= rows[i - 1].infidelity + 1e-9,
                "(c) infidelity nonincreasing at " + std::to_string(r.db) + " dB");
    }
  }
  o.require(rows.size() >= 6, "sweep size");
  o.require(rows.back().e_in > 0.45, "(a) E_in > 0.45 at the top");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < 1200.0, "runtime");
  o.detail << rows.size() << " points, single-mode cutoff up to " << top_cutoff
           << " (factored round, no two-mode matrix), " << secs << " s";
}

void noise_ordering(Outcome& o) {
  const FockCutoff c(45);
  const auto rho = gkp_damped({0.3, GkpLogical::Zero, 0}, c).density();
  const double s1 = 0.05, s2 = 0.02;
  const auto noisy = GaussianNoiseChannel({s1, 15}, c).apply(rho);
  const auto less = GaussianNoiseChannel({s2, 15}, c).apply(rho);
  const double b1 = lower_bound(noisy, {}, FreeSet::WignerPositive).lower;
  const double b2 = lower_bound(less, {}, FreeSet::WignerPositive).lower;
  o.require(b1 <= b2 + 1e-6, "ordering");
  const auto composed = GaussianNoiseChannel({s1 - s2, 15}, c).apply(less);
  const double td = 0.5 * trace_norm(Matrix(composed.matrix() - noisy.matrix()));
  o.require(td <= 1e-4, "composition law");
  o.detail << "bounds " << b1 << " <= " << b2 << ", composition trace distance " << td;
}

void property_suites(Outcome& o) {
  const FockCutoff c(30);
  std::vector<DensityMatrix> states;
  for (double eta : {0.6, 0.8, 1.0}) states.push_back(apply_loss(fock(1, c).density(), {eta}));
  states.push_back(fock(2, c).density());
  states.push_back(cat(1.0, -1, c).density());
  states.push_back(apply_loss(cat(1.5, -1, c).density(), {0.85}));
  states.push_back(mix(0.4, fock(0, c).density(), fock(1, c).density()));
  std::vector<FreeChannel> channels{
      {"loss 0.7", [](const DensityMatrix& r) { return apply_loss(r, {0.7}); }, {FreeSet::WignerPositive}},
      {"loss 0.9", [](const DensityMatrix& r) { return apply_loss(r, {0.9}); }, {FreeSet::WignerPositive}},
      {"noise 0.02", [c](const DensityMatrix& r) { return GaussianNoiseChannel({0.02, 15}, c).apply(r); },
       {FreeSet::WignerPositive}},
      {"noise 0.05", [c](const DensityMatrix& r) { return GaussianNoiseChannel({0.05, 15}, c).apply(r); },
       {FreeSet::WignerPositive}},
  };
  int checks = 0;
  for (const WitnessBox& box : {WitnessBox{1.0, 1.0}, WitnessBox{2.0, 1.0}}) {
    const auto rep = property_suite(states, channels, FreeSet::WignerPositive, box);
    checks += rep.checks;
    for (const auto& f : rep.failures) o.require(false, f.property + " " + f.detail);
  }
  o.detail << checks << " checks";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"loss threshold curve", loss_threshold},
      {"Wigner minima of the lossy photon", wigner_minima},
      {"Fock-n parity after loss", fock_n_parity},
      {"odd-parity maximality", odd_parity},
      {"activation exactness", activation_exactness},
      {"Werner analytics", werner},
      {"boundary-mixing lemma", boundary_mixing},
      {"pure-state bounds", pure_bounds},
      {"monotone hierarchy", hierarchy},
      {"GKP loss and error-correction sweep", gkp_figure},
      {"Gaussian-noise ordering", noise_ordering},
      {"property suites", property_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2zu: %s  %s  (%s) [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
