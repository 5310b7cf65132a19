#include "varmarest/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "varmarest/error.hpp"

namespace varmarest {

namespace {

constexpr double kRelTol = 1e-15;
constexpr int kMaxTerms = 10000;

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kRelTol) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kRelTol) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) fail(ErrorKind::DomainError, "regularized_gamma_p needs a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    if (u == 0.0) return -std::numeric_limits<double>::infinity();
    if (u == 1.0) return std::numeric_limits<double>::infinity();
    fail(ErrorKind::DomainError, "normal_quantile needs u in [0, 1]");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double low = 0.02425;
  double x;
  if (u < low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - low) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement.
  const double e = normal_cdf(x) - u;
  const double g = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - g / (1.0 + 0.5 * x * g);
}

double chi2_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_pdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  const double a = 0.5 * dof;
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::numbers::ln2 - std::lgamma(a));
}

double chi2_quantile(double u, double dof) {
  if (!(u >= 0.0 && u < 1.0)) fail(ErrorKind::DomainError, "chi2_quantile needs u in [0, 1)");
  if (!(dof > 0.0)) fail(ErrorKind::DomainError, "chi2_quantile needs dof > 0");
  if (u == 0.0) return 0.0;

  const double a = 0.5 * dof;
  double x;
  const double z = normal_quantile(u);
  const double k = 2.0 / (9.0 * dof);
  const double wh = 1.0 - k + z * std::sqrt(k);
  if (wh > 0.0) {
    x = dof * wh * wh * wh;
  } else {
    // Lower tail: P(a, x/2) ~ (x/2)^a / Gamma(a + 1).
    x = 2.0 * std::exp((std::log(u) + std::lgamma(a + 1.0)) / a);
  }

  double lo = 0.0;
  double hi = std::max(2.0 * x, dof + 10.0);
  while (chi2_cdf(hi, dof) < u) hi *= 2.0;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 300; ++iter) {
    const double f = chi2_cdf(x, dof) - u;
    if (std::abs(f) <= 1e-15 * std::max(u, 1e-300) || hi - lo <= 1e-15 * hi) break;
    if (f > 0.0) hi = x; else lo = x;
    const double pdf = chi2_pdf(x, dof);
    double next = pdf > 0.0 ? x - f / pdf : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

}  // namespace varmarest
