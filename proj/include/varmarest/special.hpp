#pragma once

namespace varmarest {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0. Series
/// expansion for x < a + 1, Lentz continued fraction for the complement
/// otherwise.
double regularized_gamma_p(double a, double x);

double normal_cdf(double x);

/// Acklam's rational approximation refined by one Halley step.
double normal_quantile(double u);

double chi2_cdf(double x, double dof);
double chi2_pdf(double x, double dof);

/// x with F_{chi2_dof}(x) = u; |F(x) - u| <= 1e-10 on u in [0, 1).
/// Wilson-Hilferty start, then bracketed Newton on the incomplete gamma.
/// Throws DomainError outside [0, 1).
double chi2_quantile(double u, double dof);

}  // namespace varmarest
