#include <doctest.h>

#include <cmath>

#include "varmarest/error.hpp"
#include "varmarest/special.hpp"

using namespace varmarest;

TEST_SUITE("special") {
  TEST_CASE("incomplete gamma against closed forms") {
    for (double x : {0.0, 0.01, 0.3, 1.0, 2.5, 7.0, 30.0}) {
      CHECK(regularized_gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
      CHECK(regularized_gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-13));
      // P(2, x) = 1 - (1 + x) e^{-x}
      CHECK(regularized_gamma_p(2.0, x) == doctest::Approx(1.0 - (1.0 + x) * std::exp(-x)).epsilon(1e-12));
    }
  }

  TEST_CASE("normal cdf and quantile") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    for (double u : {1e-10, 0.001, 0.1, 0.5, 0.75, 0.975, 1.0 - 1e-9}) {
      CHECK(normal_cdf(normal_quantile(u)) == doctest::Approx(u).epsilon(1e-12));
    }
  }

  TEST_CASE("chi-squared quantile examples") {
    CHECK(chi2_quantile(0.5, 2) == doctest::Approx(1.3862944).epsilon(1e-7));
    CHECK(chi2_quantile(0.5, 1) == doctest::Approx(0.4549364).epsilon(1e-7));
    CHECK(chi2_quantile(0.0, 3) == 0.0);
  }

  TEST_CASE("chi-squared quantile inverts the cdf") {
    for (int dof = 1; dof <= 6; ++dof) {
      for (double u : {1e-6, 0.01, 0.2, 0.5, 0.9, 0.999, 0.999999}) {
        CHECK(std::abs(chi2_cdf(chi2_quantile(u, dof), dof) - u) <= 1e-10);
      }
    }
  }

  TEST_CASE("chi-squared pdf with two degrees of freedom") {
    for (double x : {0.1, 1.0, 4.0}) CHECK(chi2_pdf(x, 2) == doctest::Approx(0.5 * std::exp(-x / 2)).epsilon(1e-13));
  }

  TEST_CASE("quantile domain") {
    CHECK_THROWS_AS(chi2_quantile(1.0, 2), Error);
    CHECK_THROWS_AS(chi2_quantile(-0.1, 2), Error);
  }
}
