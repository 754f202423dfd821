#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvwit/displacement.hpp"
#include "cvwit/errors.hpp"
#include "cvwit/fock.hpp"
#include "cvwit/nelder_mead.hpp"
#include "cvwit/quadrature.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cvwit;
using namespace cvwit::testing;

TEST_CASE("cutoff and state construction reject bad input") {
  CHECK_THROWS_AS(FockCutoff(1), PreconditionError);
  CHECK_THROWS_AS(PureState(Vector::Zero(4)), PreconditionError);
  Matrix bad = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(DensityMatrix{bad}, InvariantError);  // trace 3
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, InvariantError);
  CHECK_THROWS_AS(DensityMatrix{Matrix::Zero(2, 3)}, DimensionError);
  CHECK_THROWS_AS(mix(0.5, DensityMatrix(Matrix::Identity(2, 2) / 2.0), DensityMatrix(Matrix::Identity(3, 3) / 3.0)),
                  DimensionError);
}

TEST_CASE("ladder operators obey the truncated commutator") {
  const FockCutoff c(12);
  const auto ops = ladder_ops(c);
  const Matrix comm = ops.a.matrix() * ops.adag.matrix() - ops.adag.matrix() * ops.a.matrix();
  CHECK(max_abs_diff(comm.topLeftCorner(11, 11), Matrix::Identity(11, 11)) < 1e-12);
  CHECK(std::abs(comm(11, 11) - Complex(-11.0)) < 1e-12);
  CHECK(max_abs_diff(ops.adag.matrix() * ops.a.matrix(), ops.n.matrix()) < 1e-12);
  const Matrix qp = quadrature_q(c).matrix() * quadrature_p(c).matrix() - quadrature_p(c).matrix() * quadrature_q(c).matrix();
  CHECK(std::abs(qp(3, 3) - Complex(0.0, 1.0)) < 1e-12);
}

TEST_CASE("coherent tail matches a direct Poisson sum") {
  for (double mean : {0.5, 3.0, 12.0}) {
    for (int d : {5, 20, 40}) {
      double tail = 0.0;
      for (int k = d; k < d + 400; ++k) tail += std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
      CHECK(coherent_tail(mean, d) == doctest::Approx(tail).epsilon(1e-10).scale(1e-300));
    }
  }
  CHECK(coherent_tail(0.0, 3) == 0.0);
}

TEST_CASE("displacement: spectral route equals the matrix exponential and the Laguerre elements") {
  const FockCutoff c(30);
  const DisplacementGenerator gen(c);
  for_all(10, 11, [&](std::mt19937_64& g, int) {
    const Complex alpha = gauss_complex(g, 0.6);
    const Matrix spectral = gen.displacement(alpha);
    const Matrix dense = displacement_op(alpha, c).matrix();
    CHECK(max_abs_diff(spectral, dense) < 1e-10);
    CHECK(unitarity_defect(spectral) < 1e-10);
    // Low block agrees with the infinite-dimensional matrix elements.
    for (int m = 0; m < 6; ++m)
      for (int n = 0; n < 6; ++n) CHECK(std::abs(spectral(m, n) - displacement_element(m, n, alpha)) < 1e-8);
  });
  CHECK_THROWS_AS(gen.displacement(Complex(6.0, 0.0)), TruncationError);
  CHECK_THROWS_AS(displacement_op(Complex(6.0, 0.0), c), TruncationError);
}

TEST_CASE("displacement composition law on the vacuum") {
  const FockCutoff c(40);
  const DisplacementGenerator gen(c);
  for_all(10, 12, [&](std::mt19937_64& g, int) {
    const Complex a = gauss_complex(g, 0.5);
    const Complex b = gauss_complex(g, 0.5);
    Vector vac = Vector::Zero(40);
    vac(0) = 1.0;
    const Vector lhs = gen.apply(a, gen.apply(b, vac));
    const Complex phase = std::exp(Complex(0.0, (a * std::conj(b)).imag()));
    const Vector rhs = phase * gen.apply(a + b, vac);
    CHECK((lhs - rhs).norm() < 1e-8);
  });
}

TEST_CASE("squeeze operator reproduces the squeezed vacuum amplitudes") {
  const FockCutoff c(60);
  const double r = 0.5;
  const Matrix s = squeeze_op(Complex(r, 0.0), c).matrix();
  // <2k|S(r)|0> = (-tanh r)^k sqrt((2k)!) / (2^k k! sqrt(cosh r))
  for (int k = 0; k < 5; ++k) {
    const double expect = std::pow(-std::tanh(r), k) * std::exp(0.5 * std::lgamma(2 * k + 1.0) - std::lgamma(k + 1.0)) /
                          std::pow(2.0, k) / std::sqrt(std::cosh(r));
    CHECK(std::abs(s(2 * k, 0) - Complex(expect)) < 1e-10);
  }
}

TEST_CASE("fidelity and trace distance satisfy the Fuchs-van de Graaff inequalities") {
  for_all(40, 13, [&](std::mt19937_64& g, int) {
    const int d = uniform_int(g, 2, 8);
    const auto a = random_density(g, d, uniform_int(g, 1, d));
    const auto b = random_density(g, d, uniform_int(g, 1, d));
    const double f = fidelity(a, b);
    const double td = 0.5 * trace_norm(Matrix(a.matrix() - b.matrix()));
    // Pure pairs saturate the upper inequality, so allow for eigensolver roundoff in F.
    CHECK(1.0 - std::sqrt(f) <= td + 1e-9);
    CHECK(td <= std::sqrt(std::max(0.0, 1.0 - f)) + 1e-7);
    CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-8));
    CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-8));
  });
  // Pure overload agrees with the mixed one.
  auto g = rng_for(14, 0);
  const auto psi = random_pure(g, 5);
  const auto rho = random_density(g, 5, 3);
  // The mixed route takes square roots of a rank-one matrix, good to ~1e-8.
  CHECK(fidelity(psi, rho) == doctest::Approx(fidelity(psi.density(), rho)).epsilon(1e-7));
}

TEST_CASE("trace norm: Hermitian and general routes agree with singular values") {
  for_all(20, 15, [&](std::mt19937_64& g, int) {
    const Matrix h = random_hermitian(g, 6, -2.0, 2.0);
    Eigen::JacobiSVD<Matrix> svd(h);
    CHECK(trace_norm(h) == doctest::Approx(svd.singularValues().sum()).epsilon(1e-10));
    Matrix x(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) x(i, j) = gauss_complex(g);
    Eigen::JacobiSVD<Matrix> svd2(x);
    CHECK(trace_norm(x) == doctest::Approx(svd2.singularValues().sum()).epsilon(1e-10));
  });
}

TEST_CASE("tensor products respect the budget") {
  const DensityMatrix a(Matrix::Identity(10, 10) / 10.0);
  CHECK(tensor(a, a).dim() == 100);
  CHECK_THROWS_AS(tensor(a, a, 99), BudgetError);
  const auto p = parity_op(FockCutoff(10));
  CHECK(tensor(p, p).norm_bound() == doctest::Approx(1.0));
  CHECK_THROWS_AS(tensor(p, p, 50), BudgetError);
}

TEST_CASE("operator norm bounds") {
  auto g = rng_for(16, 0);
  const Matrix h = random_hermitian(g, 5, -0.3, 0.7);
  const auto op = OperatorMatrix::hermitian(h);
  CHECK(op.norm_bound() <= 0.7 + 1e-12);
  CHECK(op.scaled(-2.0).norm_bound() == doctest::Approx(2.0 * op.norm_bound()));
  Matrix nh = h;
  nh(0, 1) += 0.1;
  CHECK_THROWS_AS(OperatorMatrix::hermitian(nh), InvariantError);
}

TEST_CASE("Gauss-Hermite rule: exact on polynomials, accurate on Gaussians") {
  const auto rule = gauss_hermite(20);
  // int e^{-x^2} x^{2k} dx = Gamma(k + 1/2)
  for (int k = 0; k < 10; ++k) {
    double s = 0.0;
    for (int i = 0; i < 20; ++i) s += rule.weights(i) * std::pow(rule.nodes(i), 2 * k);
    CHECK(s == doctest::Approx(std::tgamma(k + 0.5)).epsilon(1e-12));
  }
  double direct = 0.0;
  for (int i = 0; i < 20; ++i) direct += rule.scaled_weights(i) * std::exp(-2.0 * rule.nodes(i) * rule.nodes(i));
  CHECK(direct == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-9));
}

TEST_CASE("Hermite functions match the reference recurrence, including far tails") {
  Eigen::VectorXd x(4);
  x << 0.3, -2.0, 7.5, 30.0;
  const Eigen::MatrixXd h = hermite_functions(x, 80);
  for (int i = 0; i < 4; ++i) {
    const auto ref = hermite_column(x(i), 80);
    for (int n = 0; n < 80; ++n) CHECK(h(i, n) == doctest::Approx(ref[n]).epsilon(1e-9).scale(1e-300));
  }
}

TEST_CASE("Nelder-Mead minimizes a shifted quadratic and is deterministic") {
  const Objective f = [](std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 3.0 * (x[1] + 0.5) * (x[1] + 0.5);
  };
  NelderMeadOptions opt;
  opt.f_tol = 1e-14;
  opt.max_iter = 2000;
  const auto r1 = nelder_mead(f, {0.0, 0.0}, opt);
  const auto r2 = nelder_mead(f, {0.0, 0.0}, opt);
  CHECK(r1.converged);
  CHECK(r1.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r1.x[1] == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(r1.x == r2.x);
  CHECK(r1.iterations == r2.iterations);
}
