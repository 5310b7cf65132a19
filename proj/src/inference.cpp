#include "varmarest/inference.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "varmarest/error.hpp"

namespace varmarest {

namespace {

int default_lag(int n, std::optional<int> m) { return m.value_or(n - 1); }

bool inside_a1(const VarmaSpec& spec) { return check_assumption_a1(spec).satisfies_a1(); }

void check_series(const Series& series, int d) {
  if (series.cols() != d) fail(ErrorKind::DimensionMismatch, "series dimension does not match the model");
  if (!series.allFinite()) fail(ErrorKind::NonFinite, "series contains NaN or infinite values");
}

// Least squares y = x * beta with a conditioning check on x.
Matrix least_squares(const Matrix& x, const Matrix& y) {
  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  if (qr.rank() < x.cols()) fail(ErrorKind::SingularRegressorMatrix, "regressor matrix is rank deficient");
  const Eigen::JacobiSVD<Matrix> svd(x);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0)) {
    fail(ErrorKind::SingularRegressorMatrix, "regressor matrix is numerically singular");
  }
  return qr.solve(y);
}

// Regression of X_t on (X_{t-1..t-p}, E_{t-1..t-q}) for t >= start; returns
// the (p+q) d x d coefficient matrix whose row blocks are A_i', B_j'.
Matrix lagged_regression(const Series& x, const Series* e, int p, int q, int start) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  const int rows = n - start;
  if (rows <= (p + q) * d) fail(ErrorKind::SingularRegressorMatrix, "too few observations for the requested orders");
  Matrix reg(rows, (p + q) * d);
  Matrix y(rows, d);
  for (int r = 0; r < rows; ++r) {
    const int t = start + r;
    y.row(r) = x.row(t);
    for (int i = 1; i <= p; ++i) reg.block(r, (i - 1) * d, 1, d) = x.row(t - i);
    for (int j = 1; j <= q; ++j) reg.block(r, (p + j - 1) * d, 1, d) = e->row(t - j);
  }
  return least_squares(reg, y);
}

Vector theta_from_blocks(const Matrix& beta, int p, int q, int d) {
  Vector theta((p + q) * d * d);
  for (int i = 0; i < p + q; ++i) {
    const Matrix coeff = beta.block(i * d, 0, d, d).transpose();
    theta.segment(i * d * d, d * d) = coeff.reshaped();
  }
  return theta;
}

}  // namespace

CentralSequence central_sequence(const VarmaSpec& spec, const Series& series, const CenterOutwardGrid& grid,
                                 const ScorePair& scores, std::optional<int> m) {
  check_series(series, spec.d());
  CentralSequence cs;
  cs.n = static_cast<int>(series.rows());
  cs.m = default_lag(cs.n, m);
  const Series z = residuals(spec, series);
  cs.profile = assign(z, grid);
  cs.gamma_stack = rank_cross_cov_stack(cs.profile, scores, cs.m);
  const StructuralMatrices s = build_structural(spec, cs.m);
  cs.delta = s.T * cs.gamma_stack;
  return cs;
}

CentralSequence central_sequence(const VarmaSpec& spec, const Vector& theta, const Series& series,
                                 const CenterOutwardGrid& grid, const ScorePair& scores, std::optional<int> m) {
  return central_sequence(spec.with_theta(theta), series, grid, scores, m);
}

Vector var_central_sequence_from_stack(const VarmaSpec& spec, const Vector& gamma_stack, int m) {
  if (spec.q() != 0) fail(ErrorKind::NotPureVar, "direct central sequence needs q = 0");
  const int d = spec.d();
  const int p = spec.p();
  if (gamma_stack.size() != static_cast<Eigen::Index>(m) * d * d) {
    fail(ErrorKind::SizeMismatch, "stack length does not match m d^2");
  }
  std::vector<Matrix> R(m + 2, Matrix::Zero(d, d));  // R[k] for k = 1..m, zero beyond
  for (int k = m; k >= 1; --k) {
    Matrix r = gamma_stack.segment(static_cast<Eigen::Index>(k - 1) * d * d, d * d).reshaped(d, d);
    for (int l = 1; l <= p && k + l <= m; ++l) r.noalias() += R[k + l] * spec.ar()[l - 1].transpose();
    R[k] = std::move(r);
  }
  Vector delta(p * d * d);
  for (int i = 1; i <= p; ++i) {
    delta.segment((i - 1) * d * d, d * d) = i <= m ? Vector(R[i].reshaped()) : Vector::Zero(d * d);
  }
  return delta;
}

Vector var_central_sequence_direct(const VarmaSpec& spec, const Series& series, const ScorePair& scores,
                                   const CenterOutwardGrid& grid, std::optional<int> m) {
  if (spec.q() != 0) fail(ErrorKind::NotPureVar, "direct central sequence needs q = 0");
  check_series(series, spec.d());
  const int n = static_cast<int>(series.rows());
  const int lags = default_lag(n, m);
  const RankSignProfile profile = assign(residuals(spec, series), grid);
  return var_central_sequence_from_stack(spec, rank_cross_cov_stack(profile, scores, lags), lags);
}

CrossInformation estimate_cross_information(const VarmaSpec& spec, const Series& series,
                                            const CenterOutwardGrid& grid, const ScorePair& scores,
                                            std::optional<int> m, const CentralSequence* at_theta) {
  const int n = static_cast<int>(series.rows());
  const int k = spec.num_params();
  const double h = 1.0 / std::sqrt(static_cast<double>(n));

  CentralSequence base;
  if (at_theta == nullptr) {
    base = central_sequence(spec, series, grid, scores, m);
    at_theta = &base;
  }

  CrossInformation out;
  out.upsilon.resize(k, k);
  for (int i = 0; i < k; ++i) {
    Vector theta = spec.theta();
    theta(i) += h;
    double sign = 1.0;
    VarmaSpec shifted = spec.with_theta(theta);
    if (!inside_a1(shifted)) {
      theta(i) -= 2.0 * h;
      shifted = spec.with_theta(theta);
      if (!inside_a1(shifted)) {
        fail(ErrorKind::PerturbedModelUnstable,
             "both perturbations of parameter " + std::to_string(i + 1) + " leave the A1 region");
      }
      sign = -1.0;
      out.reversed_columns.push_back(i);
    }
    const CentralSequence moved = central_sequence(shifted, series, grid, scores, m);
    out.upsilon.col(i) = -sign * (moved.delta - at_theta->delta);
  }
  return out;
}

Vector one_step(const Vector& theta, const Matrix& upsilon, const Vector& delta, int n) {
  if (upsilon.rows() != upsilon.cols() || upsilon.rows() != theta.size() || delta.size() != theta.size()) {
    fail(ErrorKind::DimensionMismatch, "one-step update needs matching theta, upsilon and delta");
  }
  if (n < 1) fail(ErrorKind::DomainError, "sample size must be positive");
  const Eigen::FullPivLU<Matrix> lu(upsilon);
  if (!upsilon.allFinite() || !lu.isInvertible()) fail(ErrorKind::SingularUpsilon, "cross-information estimate is singular");
  const Eigen::JacobiSVD<Matrix> svd(upsilon);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-14 * sv(0)) fail(ErrorKind::SingularUpsilon, "cross-information estimate is singular");
  return theta + lu.solve(delta) / std::sqrt(static_cast<double>(n));
}

std::string_view to_string(PrelimMethod method) {
  switch (method) {
    case PrelimMethod::Auto: return "auto";
    case PrelimMethod::OlsVar: return "ols_var";
    case PrelimMethod::HannanRissanen: return "hannan_rissanen";
  }
  return "unknown";
}

PrelimMethod parse_prelim_method(std::string_view name) {
  if (name == "auto") return PrelimMethod::Auto;
  if (name == "ols_var" || name == "ols") return PrelimMethod::OlsVar;
  if (name == "hannan_rissanen" || name == "hr") return PrelimMethod::HannanRissanen;
  fail(ErrorKind::ConfigError, "unknown preliminary method '" + std::string(name) + "'");
}

Vector preliminary_estimate(const Series& series, int p, int q, PrelimMethod method) {
  const int n = static_cast<int>(series.rows());
  const int d = static_cast<int>(series.cols());
  if (p < 0 || q < 0 || p + q < 1 || d < 1) fail(ErrorKind::DimensionMismatch, "invalid orders");
  check_series(series, d);
  if (method == PrelimMethod::Auto) method = q == 0 ? PrelimMethod::OlsVar : PrelimMethod::HannanRissanen;

  Vector theta;
  if (method == PrelimMethod::OlsVar) {
    if (q != 0) fail(ErrorKind::ConfigError, "ols_var needs q = 0");
    theta = theta_from_blocks(lagged_regression(series, nullptr, p, 0, p), p, 0, d);
  } else {
    const int h = std::max(p, static_cast<int>(std::ceil(1.5 * std::sqrt(static_cast<double>(n)))));
    const Matrix long_ar = lagged_regression(series, nullptr, h, 0, h);
    Series proxy = Series::Zero(n, d);
    for (int t = h; t < n; ++t) {
      Eigen::RowVectorXd e = series.row(t);
      for (int i = 1; i <= h; ++i) e.noalias() -= series.row(t - i) * long_ar.block((i - 1) * d, 0, d, d);
      proxy.row(t) = e;
    }
    theta = theta_from_blocks(lagged_regression(series, &proxy, p, q, h + std::max(p, q)), p, q, d);
  }
  if (!theta.allFinite()) fail(ErrorKind::PreliminaryFailed, "preliminary estimate is not finite");
  if (!inside_a1(VarmaSpec::from_theta(p, q, d, theta))) {
    fail(ErrorKind::PreliminaryFailed, "preliminary estimate violates stationarity or invertibility");
  }
  return theta;
}

CovarianceEstimate estimate_covariance(const Matrix& upsilon, const Matrix& T, const ScorePair& scores, int d,
                                       int n) {
  if (upsilon.rows() != upsilon.cols() || T.rows() != upsilon.rows()) {
    fail(ErrorKind::DimensionMismatch, "upsilon and T do not conform");
  }
  const Eigen::FullPivLU<Matrix> lu(upsilon);
  if (!upsilon.allFinite() || !lu.isInvertible()) fail(ErrorKind::SingularUpsilon, "cross-information estimate is singular");
  const Matrix inv = lu.inverse();
  const double factor = scores.sigma2_j1 * scores.sigma2_j2 / (static_cast<double>(d) * d);
  CovarianceEstimate out;
  out.omega = factor * inv * (T * T.transpose()) * inv.transpose();
  out.std_errors = (out.omega.diagonal().array().max(0.0) / n).sqrt();
  return out;
}

EstimationResult r_estimate(const Series& series, const EstimationOptions& options) {
  const int n = static_cast<int>(series.rows());
  const int d = static_cast<int>(series.cols());
  check_series(series, d);

  EstimationResult result;
  result.p = options.p;
  result.q = options.q;
  result.d = d;
  result.n = n;
  result.factorization = factorize_n(n, d, options.n_R, options.n_S);
  const auto& f = result.factorization;
  const CenterOutwardGrid grid =
      make_grid(f.n_R, f.n_S, f.n_0, d, options.grid.value_or(default_grid_strategy(d)), options.seed);
  const ScorePair scores = scores_by_name(options.scores, d);
  result.scores = scores.name;
  const int k = options.iterations.value_or(n >= 1000 ? 5 : 10);
  if (k < 1) fail(ErrorKind::ConfigError, "iterations must be at least 1");

  result.theta_prelim = preliminary_estimate(series, options.p, options.q, options.prelim);
  VarmaSpec spec = VarmaSpec::from_theta(options.p, options.q, d, result.theta_prelim);

  CentralSequence cs = central_sequence(spec, series, grid, scores, options.m);
  CrossInformation ci = estimate_cross_information(spec, series, grid, scores, options.m, &cs);
  result.upsilon = ci.upsilon;
  result.reversed_columns = ci.reversed_columns;

  for (int it = 0; it < k; ++it) {
    if (it > 0) cs = central_sequence(spec, series, grid, scores, options.m);
    const Vector target = one_step(spec.theta(), result.upsilon, cs.delta, n);
    const Vector step = target - spec.theta();
    double scale = 1.0;
    VarmaSpec next = spec.with_theta(target);
    int halvings = 0;
    while (!inside_a1(next) && halvings < 30) {
      scale *= 0.5;
      ++halvings;
      next = spec.with_theta(spec.theta() + scale * step);
    }
    if (!inside_a1(next)) {
      scale = 0.0;
      next = spec;
    }
    result.iterations.push_back({spec.theta(), cs.delta.norm(), scale});
    spec = next;
    result.last_profile = std::move(cs.profile);
  }
  result.theta_tilde = spec.theta();

  if (options.covariance) {
    const StructuralMatrices s = build_structural(spec, options.m.value_or(n - 1));
    const CovarianceEstimate cov = estimate_covariance(result.upsilon, s.T, scores, d, n);
    result.omega = cov.omega;
    result.std_errors = cov.std_errors;
  }
  return result;
}

}  // namespace varmarest
