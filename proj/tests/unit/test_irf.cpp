#include <doctest.h>

#include <algorithm>

#include "varmarest/error.hpp"
#include "varmarest/irf.hpp"

using namespace varmarest;

TEST_SUITE("irf") {
  TEST_CASE("VARMA(1, 1) coefficients") {
    Matrix a(2, 2), b(2, 2);
    a << 0.5, 0.1, 0.0, 0.3;
    b << 0.4, 0.0, 0.2, 0.5;
    const auto w = vma_coefficients(build_spec(1, 1, 2, {a}, {b}), 4);
    REQUIRE(w.size() == 5);
    CHECK(w[0] == Matrix::Identity(2, 2));
    CHECK((w[1] - (a + b)).norm() < 1e-15);
    CHECK((w[2] - a * (a + b)).norm() < 1e-15);
    CHECK((w[4] - a * a * a * (a + b)).norm() < 1e-15);
  }

  TEST_CASE("VAR(1) responses are columns of powers of A") {
    Matrix a(2, 2);
    a << 0.2, 0.3, -0.6, 1.1;
    const IrfTable t = impulse_response(build_spec(1, 0, 2, {a}, {}), 2, 5);
    REQUIRE(t.paths.rows() == 6);
    Matrix power = Matrix::Identity(2, 2);
    for (int l = 0; l <= 5; ++l) {
      CHECK((t.paths.row(l).transpose() - power.col(1)).norm() < 1e-14);
      power = a * power;
    }
    const std::string csv = irf_csv(t);
    CHECK(csv.rfind("horizon,shock,response_variable,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6 * 2);
  }

  TEST_CASE("diagonal systems have no cross responses") {
    Matrix a = Matrix::Zero(2, 2);
    a.diagonal() << 0.7, -0.4;
    const IrfTable t = impulse_response(build_spec(1, 0, 2, {a}, {}), 1, 10);
    CHECK(t.paths.col(1).norm() == 0.0);
  }

  TEST_CASE("responses decay") {
    Matrix a(2, 2);
    a << 0.2, 0.3, -0.6, 1.1;
    const IrfTable t = impulse_response(build_spec(1, 0, 2, {a}, {}), 1, 40);
    for (int l = 21; l <= 40; ++l) CHECK(t.paths.row(l).norm() <= t.paths.row(l - 20).norm());
    CHECK(t.paths.row(40).norm() < 1e-3);
  }

  TEST_CASE("errors") {
    const VarmaSpec spec = build_spec(1, 0, 2, {0.5 * Matrix::Identity(2, 2)}, {});
    CHECK_THROWS_AS(impulse_response(spec, 0), Error);
    CHECK_THROWS_AS(impulse_response(spec, 3), Error);
    const VarmaSpec unit = build_spec(1, 0, 2, {Matrix::Identity(2, 2)}, {});
    CHECK_THROWS_AS(vma_coefficients(unit, 5), Error);
  }
}
