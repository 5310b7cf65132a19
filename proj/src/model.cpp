#include "varmarest/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "varmarest/error.hpp"

namespace varmarest {

namespace {

void check_square(const std::vector<Matrix>& mats, int d, const char* what) {
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].rows() != d || mats[i].cols() != d) {
      fail(ErrorKind::DimensionMismatch, std::string(what) + " matrix " + std::to_string(i + 1) +
                                             " is not " + std::to_string(d) + "x" +
                                             std::to_string(d));
    }
  }
}

// Moduli of the roots of det(I - sum C_i z^i) = 0 from the eigenvalues of the
// block companion matrix of (C_1, ..., C_k): root = 1 / eigenvalue.
std::vector<double> root_moduli(const std::vector<Matrix>& coeffs, int d, double sign) {
  const int k = static_cast<int>(coeffs.size());
  std::vector<double> out;
  if (k == 0) return out;
  Matrix companion = Matrix::Zero(k * d, k * d);
  for (int i = 0; i < k; ++i) companion.block(0, i * d, d, d) = sign * coeffs[i];
  if (k > 1) companion.block(d, 0, (k - 1) * d, (k - 1) * d).setIdentity();
  Eigen::EigenSolver<Matrix> solver(companion, /*computeEigenvectors=*/false);
  for (const auto& lambda : solver.eigenvalues()) {
    const double modulus = std::abs(lambda);
    if (modulus > 1e-14) out.push_back(1.0 / modulus);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool all_outside(const std::vector<double>& moduli, double tolerance) {
  return std::all_of(moduli.begin(), moduli.end(), [&](double m) { return m > 1.0 + tolerance; });
}

}  // namespace

VarmaSpec VarmaSpec::build(int p, int q, int d, std::vector<Matrix> ar, std::vector<Matrix> ma) {
  if (p < 0 || q < 0 || d < 1) fail(ErrorKind::DimensionMismatch, "orders must be non-negative and d >= 1");
  if (p + q < 1) fail(ErrorKind::DimensionMismatch, "p + q must be at least 1");
  if (static_cast<int>(ar.size()) != p) {
    fail(ErrorKind::DimensionMismatch,
         "expected " + std::to_string(p) + " AR matrices, got " + std::to_string(ar.size()));
  }
  if (static_cast<int>(ma.size()) != q) {
    fail(ErrorKind::DimensionMismatch,
         "expected " + std::to_string(q) + " MA matrices, got " + std::to_string(ma.size()));
  }
  check_square(ar, d, "AR");
  check_square(ma, d, "MA");

  VarmaSpec spec;
  spec.p_ = p;
  spec.q_ = q;
  spec.d_ = d;
  spec.theta_.resize((p + q) * d * d);
  int offset = 0;
  for (const auto* group : {&ar, &ma}) {
    for (const Matrix& m : *group) {
      spec.theta_.segment(offset, d * d) = m.reshaped();  // column-major vec
      offset += d * d;
    }
  }
  spec.ar_ = std::move(ar);
  spec.ma_ = std::move(ma);
  return spec;
}

VarmaSpec VarmaSpec::from_theta(int p, int q, int d, const Vector& theta) {
  if (d < 1 || p < 0 || q < 0 || theta.size() != (p + q) * d * d) {
    fail(ErrorKind::DimensionMismatch, "theta length " + std::to_string(theta.size()) +
                                           " does not match (p+q)d^2");
  }
  std::vector<Matrix> ar, ma;
  for (int i = 0; i < p + q; ++i) {
    Matrix m = theta.segment(i * d * d, d * d).reshaped(d, d);
    (i < p ? ar : ma).push_back(std::move(m));
  }
  return build(p, q, d, std::move(ar), std::move(ma));
}

VarmaSpec build_spec(int p, int q, int d, std::vector<Matrix> ar, std::vector<Matrix> ma) {
  return VarmaSpec::build(p, q, d, std::move(ar), std::move(ma));
}

StabilityReport check_assumption_a1(const VarmaSpec& spec, double tolerance) {
  StabilityReport report;
  const int d = spec.d();
  report.ar_root_moduli = root_moduli(spec.ar(), d, 1.0);
  report.ma_root_moduli = root_moduli(spec.ma(), d, -1.0);
  report.stationary = all_outside(report.ar_root_moduli, tolerance);
  report.invertible = all_outside(report.ma_root_moduli, tolerance);
  if (spec.p() > 0) report.ar_leading_nonsingular = std::abs(spec.ar().back().determinant()) > 1e-12;
  if (spec.q() > 0) report.ma_leading_nonsingular = std::abs(spec.ma().back().determinant()) > 1e-12;
  return report;
}

std::vector<Matrix> green_matrices(std::span<const Matrix> coeffs, int d, OperatorKind kind,
                                   int horizon, bool check_growth) {
  if (horizon < 0) fail(ErrorKind::DomainError, "horizon must be non-negative");
  for (const Matrix& c : coeffs) {
    if (c.rows() != d || c.cols() != d) fail(ErrorKind::DimensionMismatch, "operator matrix is not d x d");
  }
  const int order = static_cast<int>(coeffs.size());
  // AR: G_u = sum A_i G_{u-i};  MA: H_u = -sum B_i H_{u-i}.
  const double sign = kind == OperatorKind::AR ? 1.0 : -1.0;
  std::vector<Matrix> out;
  out.reserve(horizon + 1);
  out.push_back(Matrix::Identity(d, d));
  for (int u = 1; u <= horizon; ++u) {
    Matrix g = Matrix::Zero(d, d);
    for (int i = 1; i <= std::min(order, u); ++i) g.noalias() += coeffs[i - 1] * out[u - i];
    out.push_back(sign * g);
  }

  if (check_growth && horizon >= 8) {
    const int window = (horizon + 3) / 4;
    bool growing = out[horizon].norm() > 1.0;
    for (int u = horizon - window + 1; u <= horizon && growing; ++u) {
      growing = out[u].norm() > out[u - 1].norm();
    }
    if (growing) {
      fail(ErrorKind::NotStable, "Green matrix norms grow over the last " + std::to_string(window) +
                                     " lags (||G_H|| = " + std::to_string(out[horizon].norm()) + ")");
    }
  }
  return out;
}

std::vector<Matrix> green_matrices(const VarmaSpec& spec, OperatorKind kind, int horizon,
                                   bool check_growth) {
  const auto& coeffs = kind == OperatorKind::AR ? spec.ar() : spec.ma();
  return green_matrices(std::span<const Matrix>(coeffs), spec.d(), kind, horizon, check_growth);
}

Series residuals(const VarmaSpec& spec, const Series& series) {
  const int d = spec.d();
  if (series.cols() != d) {
    fail(ErrorKind::DimensionMismatch, "series has " + std::to_string(series.cols()) +
                                           " columns, model dimension is " + std::to_string(d));
  }
  const Eigen::Index n = series.rows();
  Series z(n, d);
  for (Eigen::Index t = 0; t < n; ++t) {
    Vector zt = series.row(t).transpose();
    for (int i = 1; i <= spec.p() && i <= t; ++i) zt.noalias() -= spec.ar()[i - 1] * series.row(t - i).transpose();
    for (int j = 1; j <= spec.q() && j <= t; ++j) zt.noalias() -= spec.ma()[j - 1] * z.row(t - j).transpose();
    z.row(t) = zt.transpose();
  }
  return z;
}

Series filter_innovations(const VarmaSpec& spec, const Series& innovations) {
  const int d = spec.d();
  if (innovations.cols() != d) fail(ErrorKind::DimensionMismatch, "innovation dimension mismatch");
  const Eigen::Index n = innovations.rows();
  Series x(n, d);
  for (Eigen::Index t = 0; t < n; ++t) {
    Vector xt = innovations.row(t).transpose();
    for (int i = 1; i <= spec.p() && i <= t; ++i) xt.noalias() += spec.ar()[i - 1] * x.row(t - i).transpose();
    for (int j = 1; j <= spec.q() && j <= t; ++j) xt.noalias() += spec.ma()[j - 1] * innovations.row(t - j).transpose();
    x.row(t) = xt.transpose();
  }
  return x;
}

Series simulate(const VarmaSpec& spec, const InnovationSource& innovations, std::size_t n,
                std::size_t burn_in, std::uint64_t seed) {
  const StabilityReport report = check_assumption_a1(spec);
  if (!report.stationary) {
    fail(ErrorKind::NotStationary, "AR polynomial has a root of modulus " +
                                       std::to_string(report.ar_root_moduli.front()));
  }
  const Series eps = innovations(burn_in + n, seed);
  if (eps.rows() != static_cast<Eigen::Index>(burn_in + n) || eps.cols() != spec.d()) {
    fail(ErrorKind::DimensionMismatch, "innovation source returned the wrong shape");
  }
  const Series full = filter_innovations(spec, eps);
  return full.bottomRows(static_cast<Eigen::Index>(n));
}

}  // namespace varmarest
