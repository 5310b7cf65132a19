#include <doctest.h>

#include <random>

#include "support/test_support.hpp"
#include "varmarest/error.hpp"
#include "varmarest/structural.hpp"

using namespace varmarest;

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  }
  return out;
}

}  // namespace

TEST_SUITE("structural") {
  TEST_CASE("T agrees with the Jacobian weights") {
    std::mt19937_64 rng(73);
    struct Case {
      int p, q, d;
    };
    for (Case c : {Case{1, 0, 2}, Case{2, 0, 2}, Case{0, 1, 2}, Case{0, 2, 3}, Case{1, 1, 2}, Case{2, 1, 2},
                   Case{1, 2, 3}}) {
      const VarmaSpec spec = testing::random_stable_spec(rng, c.p, c.q, c.d);
      const int m = 30;
      const StructuralMatrices s = build_structural(spec, m);
      const Matrix oracle = jacobian_weights(spec, m);
      CAPTURE(c.p);
      CAPTURE(c.q);
      REQUIRE(s.T.rows() == spec.num_params());
      REQUIRE(s.T.cols() == m * c.d * c.d);
      CHECK((s.T - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("VAR(1) weights are Kronecker powers") {
    Matrix a(2, 2);
    a << 0.2, 0.3, -0.6, 1.1;
    const StructuralMatrices s = build_structural(build_spec(1, 0, 2, {a}, {}), 4);
    Matrix power = Matrix::Identity(2, 2);
    for (int l = 1; l <= 4; ++l) {
      Matrix expected(4, 4);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) expected.block(2 * r, 2 * c, 2, 2) = power(r, c) * Matrix::Identity(2, 2);
      }
      CHECK((s.T.block(0, 4 * (l - 1), 4, 4) - expected).norm() < 1e-12);
      power = a * power;
    }
  }

  TEST_CASE("D(L) and Casorati dimensions") {
    std::mt19937_64 rng(79);
    const VarmaSpec spec = testing::random_stable_spec(rng, 2, 1, 2);
    const StructuralMatrices s = build_structural(spec, 10);
    CHECK(s.D.size() == 3);
    CHECK(s.casorati.rows() == 6);
    CHECK(s.P.rows() == 12);
    CHECK(s.Q_blocks.size() == 10);
    CHECK((s.P * kron(s.casorati, Matrix::Identity(2, 2)) - Matrix::Identity(12, 12)).norm() <
          1e-8);
  }

  TEST_CASE("assumption violations") {
    const VarmaSpec unit = build_spec(1, 0, 2, {Matrix::Identity(2, 2)}, {});
    CHECK_THROWS_AS(build_structural(unit, 5), Error);
    const VarmaSpec noninvertible = build_spec(0, 1, 2, {}, {2.0 * Matrix::Identity(2, 2)});
    try {
      build_structural(noninvertible, 5);
      FAIL("expected NotStable");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotStable);
    }
  }
}
