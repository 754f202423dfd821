#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvwit/errors.hpp"
#include "cvwit/witness.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cvwit;
using namespace cvwit::testing;

TEST_CASE("box validation and parsing") {
  CHECK_THROWS_AS((WitnessBox{0.0, 1.0}.validate()), PreconditionError);
  CHECK_THROWS_AS((WitnessBox{1.0, -1.0}.validate()), PreconditionError);
  CHECK(WitnessBox{2.0, 0.5}.min_side() == 0.5);
  CHECK(parse_free_set("gng") == FreeSet::ConvexGaussianHull);
  CHECK(parse_free_set("gaussian_two_copy") == FreeSet::GaussianTwoCopy);
  CHECK_THROWS(parse_free_set("magic"));
}

TEST_CASE("witness values agree with dense traces") {
  // States live on the lowest 6 levels so the dense displaced parity at this cutoff is accurate.
  const FockCutoff c(24);
  for_all(20, 51, [&](std::mt19937_64& g, int) {
    Matrix low = Matrix::Zero(24, 24);
    low.topLeftCorner(6, 6) = random_density(g, 6, uniform_int(g, 1, 4)).matrix();
    const DensityMatrix rho(low);
    Vector v = Vector::Zero(24);
    v.head(5) = random_vector(g, 5);
    const PureState psi(v);
    const double lam = uniform(g, 0.2, 0.9);
    const Complex alpha = gauss_complex(g, 0.3);
    const std::vector<WitnessSpec> specs{
        {DisplacedParity{alpha}, {1.0, 1.0}, FreeSet::WignerPositive, 1.0, false},
        {PureProjector{psi, lam}, {1.0, 1.0}, FreeSet::ConvexGaussianHull, 1.0, false},
        {TwoCopyProjector{psi, lam}, {1.0, 1.0}, FreeSet::GaussianTwoCopy, 1.0, false},
    };
    for (const auto& s : specs) {
      const auto w = witness_matrix(s, c);
      double dense = 0.0;
      if (s.two_copy()) {
        dense = -tensor(rho, rho).expectation(w.matrix());
      } else {
        dense = -rho.expectation(w.matrix());
      }
      CHECK(witness_value(s, rho) == doctest::Approx(dense).epsilon(1e-8).scale(1e-8));
      const auto [lo, hi] = witness_spectrum(s);
      Eigen::SelfAdjointEigenSolver<Matrix> es(w.matrix(), Eigen::EigenvaluesOnly);
      CHECK(lo <= es.eigenvalues()(0) + 1e-9);
      CHECK(hi >= es.eigenvalues()(es.eigenvalues().size() - 1) - 1e-9);
    }
  });
}

TEST_CASE("box checks and rescaling") {
  const FockCutoff c(10);
  const WitnessSpec parity{DisplacedParity{0.0}, {0.5, 0.5}, FreeSet::WignerPositive, 1.0, false};
  CHECK_THROWS_AS(check_box(parity), BoxViolation);
  const auto fitted = rescale_to_box(parity);
  CHECK(fitted.scale == doctest::Approx(0.5));
  CHECK_NOTHROW(check_box(fitted));
  auto g = rng_for(52, 0);
  const Matrix h = random_hermitian(g, 10, -3.0, 2.0);
  const auto w = rescale_to_box(OperatorMatrix::hermitian(h), {2.0, 1.5});
  CHECK(w.norm_bound() == doctest::Approx(1.5).epsilon(1e-9));
  const WitnessSpec two{TwoCopyProjector{PureState(Vector::Ones(10)), 0.5}, {1.0, 1.0}, FreeSet::ConvexGaussianHull,
                        1.0, false};
  CHECK_THROWS_AS(check_box(two), PreconditionError);
}

TEST_CASE("lifted witness acts as W (x) I") {
  const FockCutoff c(8);
  auto g = rng_for(53, 0);
  const auto rho = random_density(g, 8, 3);
  const auto w = parity_op(c);
  const auto lifted = lift_witness(w);
  CHECK(-tensor(rho, rho).expectation(lifted.matrix()) == doctest::Approx(-rho.expectation(w.matrix())).epsilon(1e-12));
  CHECK(lifted.dim() == 64);
}

TEST_CASE("Gaussian fidelity of Gaussian states is one") {
  const FockCutoff c(40);
  CHECK(gaussian_fidelity(fock(0, c)).lambda_g == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gaussian_fidelity(coherent(Complex(0.8, -0.4), c)).lambda_g == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gaussian_fidelity(gaussian_pure({Complex(0.3, 0.2), 0.6, 1.1}, c)).lambda_g ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Gaussian fidelity of one photon matches the dense-grid oracle") {
  const double oracle = one_photon_gaussian_fidelity_grid();
  const auto r = gaussian_fidelity(fock(1, FockCutoff(40)));
  CHECK(r.lambda_g == doctest::Approx(oracle).epsilon(1e-4));
  // The oracle itself is a lower bound that cannot exceed the optimizer by more than grid resolution.
  CHECK(oracle <= r.lambda_g + 1e-6);
  CHECK(gaussian_overlap(fock(1, FockCutoff(40)), r.argmax) == doctest::Approx(r.lambda_g).epsilon(1e-12));
}

TEST_CASE("Gaussian fidelity is invariant under rotation and displacement of the input") {
  const FockCutoff c(40);
  const auto base = cat(Complex(1.0, 0.0), -1, c);
  const double l0 = gaussian_fidelity(base).lambda_g;
  const Matrix d = displacement_op(Complex(0.3, -0.2), c).matrix();
  const PureState moved(d * base.amplitudes());
  CHECK(gaussian_fidelity(moved).lambda_g == doctest::Approx(l0).epsilon(1e-5));
}

TEST_CASE("Gaussian fidelity is reproducible for a fixed seed list") {
  const FockCutoff c(30);
  const auto psi = cat(Complex(1.5, 0.0), -1, c);
  GaussianFidelityConfig cfg;
  cfg.seeds = {7, 8};
  const auto a = gaussian_fidelity(psi, cfg);
  const auto b = gaussian_fidelity(psi, cfg);
  CHECK(a.lambda_g == b.lambda_g);
  CHECK(a.argmax.alpha == b.argmax.alpha);
}
