#include <doctest.h>

#include <random>

#include "support/test_support.hpp"
#include "varmarest/error.hpp"
#include "varmarest/model.hpp"
#include "varmarest/montecarlo.hpp"

using namespace varmarest;

namespace {

Matrix motivating_a() {
  Matrix a(2, 2);
  a << 0.2, 0.3, -0.6, 1.1;
  return a;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("theta stacks the columns of each coefficient matrix") {
    const VarmaSpec spec = build_spec(1, 0, 2, {motivating_a()}, {});
    Vector expected(4);
    expected << 0.2, -0.6, 0.3, 1.1;
    CHECK(spec.theta().isApprox(expected, 0.0));
    CHECK(spec.num_params() == 4);
  }

  TEST_CASE("from_theta round trips a VARMA(1, 1)") {
    Matrix a(2, 2), b(2, 2);
    a << 0.5, 0.1, 0.0, 0.3;
    b << 0.4, 0.0, 0.2, 0.5;
    const VarmaSpec spec = build_spec(1, 1, 2, {a}, {b});
    REQUIRE(spec.theta().size() == 8);
    const VarmaSpec back = VarmaSpec::from_theta(1, 1, 2, spec.theta());
    CHECK(back.ar()[0] == a);
    CHECK(back.ma()[0] == b);
  }

  TEST_CASE("zero MA coefficient in one dimension") {
    const VarmaSpec spec = build_spec(0, 1, 1, {}, {Matrix::Zero(1, 1)});
    CHECK(spec.theta().size() == 1);
    CHECK(spec.theta()(0) == 0.0);
  }

  TEST_CASE("mismatched coefficient shapes are rejected") {
    CHECK_THROWS_AS(build_spec(1, 0, 2, {Matrix::Zero(3, 3)}, {}), Error);
    CHECK_THROWS_AS(VarmaSpec::from_theta(1, 0, 2, Vector::Zero(3)), Error);
  }

  TEST_CASE("root moduli of the motivating VAR(1)") {
    // det(I - A z) = 1 - 1.3 z + 0.4 z^2 has roots 1.25 and 2.
    const StabilityReport r = check_assumption_a1(build_spec(1, 0, 2, {motivating_a()}, {}));
    REQUIRE(r.ar_root_moduli.size() == 2);
    CHECK(r.ar_root_moduli[0] == doctest::Approx(1.25).epsilon(1e-10));
    CHECK(r.ar_root_moduli[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.satisfies_a1());
  }

  TEST_CASE("white noise has no finite roots and a unit root fails") {
    const StabilityReport zero = check_assumption_a1(build_spec(1, 0, 2, {Matrix::Zero(2, 2)}, {}));
    CHECK(zero.ar_root_moduli.empty());
    CHECK(zero.stationary);
    CHECK_FALSE(zero.ar_leading_nonsingular);

    const StabilityReport unit = check_assumption_a1(build_spec(1, 0, 2, {Matrix::Identity(2, 2)}, {}));
    CHECK_FALSE(unit.stationary);
    CHECK_FALSE(unit.satisfies_a1());
  }

  TEST_CASE("non-invertible MA part is reported") {
    const StabilityReport r = check_assumption_a1(build_spec(0, 1, 2, {}, {1.5 * Matrix::Identity(2, 2)}));
    CHECK(r.stationary);
    CHECK_FALSE(r.invertible);
  }

  TEST_CASE("AR Green matrices of a VAR(1) are powers of A") {
    const Matrix a = motivating_a();
    const auto g = green_matrices(build_spec(1, 0, 2, {a}, {}), OperatorKind::AR, 6);
    REQUIRE(g.size() == 7);
    Matrix power = Matrix::Identity(2, 2);
    for (int u = 0; u <= 6; ++u) {
      CHECK((g[u] - power).norm() < 1e-14);
      power = a * power;
    }
  }

  TEST_CASE("MA Green matrices of a VMA(1) are powers of -B") {
    Matrix b(2, 2);
    b << 0.4, 0.0, 0.2, 0.5;
    const auto h = green_matrices(build_spec(0, 1, 2, {}, {b}), OperatorKind::MA, 5);
    Matrix power = Matrix::Identity(2, 2);
    for (int u = 0; u <= 5; ++u) {
      CHECK((h[u] - power).norm() < 1e-14);
      power = -b * power;
    }
  }

  TEST_CASE("explosive operator fails the growth check") {
    const std::vector<Matrix> coeffs{1.2 * Matrix::Identity(2, 2)};
    CHECK_THROWS_AS(green_matrices(coeffs, 2, OperatorKind::AR, 40), Error);
    CHECK_NOTHROW(green_matrices(coeffs, 2, OperatorKind::AR, 40, false));
  }

  TEST_CASE("residuals invert the filter") {
    std::mt19937_64 rng(11);
    for (auto [p, q] : {std::pair{1, 0}, std::pair{0, 2}, std::pair{2, 1}}) {
      const VarmaSpec spec = testing::random_stable_spec(rng, p, q, 3);
      const Series eps = testing::gaussian_series(rng, 150, 3);
      const Series x = filter_innovations(spec, eps);
      CHECK((residuals(spec, x) - eps).cwiseAbs().maxCoeff() < 1e-11);
    }
  }

  TEST_CASE("residual dimension mismatch") {
    const VarmaSpec spec = build_spec(1, 0, 2, {motivating_a()}, {});
    CHECK_THROWS_AS(residuals(spec, Series::Zero(10, 3)), Error);
  }

  TEST_CASE("simulate with zero coefficients returns the innovations") {
    const VarmaSpec spec = build_spec(1, 0, 2, {Matrix::Zero(2, 2)}, {});
    const InnovationSource source = innovation_source(spherical_gaussian_sampler(2));
    const Series x = simulate(spec, source, 50, 20, 9);
    const Series eps = source(70, 9);
    CHECK(x == eps.bottomRows(50));
  }

  TEST_CASE("simulate is deterministic and rejects non-stationary models") {
    const VarmaSpec spec = build_spec(1, 0, 2, {motivating_a()}, {});
    const InnovationSource source = innovation_source(spherical_gaussian_sampler(2));
    CHECK(simulate(spec, source, 100, kDefaultBurnIn, 5) == simulate(spec, source, 100, kDefaultBurnIn, 5));
    CHECK_FALSE(simulate(spec, source, 100, kDefaultBurnIn, 5) == simulate(spec, source, 100, kDefaultBurnIn, 6));
    const VarmaSpec unit = build_spec(1, 0, 2, {Matrix::Identity(2, 2)}, {});
    CHECK_THROWS_AS(simulate(unit, source, 100, kDefaultBurnIn, 5), Error);
  }

  TEST_CASE("simulated VAR(1) satisfies the Yule-Walker identity") {
    const Matrix a = motivating_a();
    const VarmaSpec spec = build_spec(1, 0, 2, {a}, {});
    const int n = 20000;
    const Series x = simulate(spec, innovation_source(spherical_gaussian_sampler(2)), n, kDefaultBurnIn, 21);
    Matrix g0 = Matrix::Zero(2, 2), g1 = Matrix::Zero(2, 2);
    for (int t = 1; t < n; ++t) {
      g0 += x.row(t).transpose() * x.row(t) / n;
      g1 += x.row(t).transpose() * x.row(t - 1) / n;
    }
    CHECK((g1 - a * g0).norm() / g0.norm() < 0.05);
  }
}
