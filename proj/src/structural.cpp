#include "varmarest/structural.hpp"

#include <string>

#include <Eigen/SVD>

#include "varmarest/error.hpp"

namespace varmarest {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smallest = s(s.size() - 1);
  return smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
}

// Element u of a Green sequence, zero for negative u.
const Matrix& at(const std::vector<Matrix>& seq, int u, const Matrix& zero) {
  return u < 0 ? zero : seq[u];
}

void require_a1(const VarmaSpec& spec) {
  const StabilityReport report = check_assumption_a1(spec);
  if (!report.stationary) fail(ErrorKind::NotStationary, "AR operator has a root inside the unit circle");
  if (!report.invertible) fail(ErrorKind::NotStable, "MA operator is not invertible");
}

}  // namespace

StructuralMatrices build_structural(const VarmaSpec& spec, int m) {
  if (m < 1) fail(ErrorKind::LagOutOfRange, "truncation lag must be at least 1");
  require_a1(spec);

  const int p = spec.p();
  const int q = spec.q();
  const int d = spec.d();
  const int N = p + q;
  const int d2 = d * d;
  const int horizon = std::max(N, m);
  const Matrix zero = Matrix::Zero(d, d);
  const Matrix eye = Matrix::Identity(d, d);

  const auto G = green_matrices(spec, OperatorKind::AR, N, false);
  const auto H = green_matrices(spec, OperatorKind::MA, horizon, false);

  StructuralMatrices s;
  s.p = p;
  s.q = q;
  s.d = d;
  s.m = m;

  s.M = Matrix::Zero(N * d2, N * d2);
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < p; ++c) {
      if (r >= c) s.M.block(r * d2, c * d2, d2, d2) = kron(G[r - c].transpose(), eye);
    }
    for (int j = 0; j < q; ++j) {
      if (r >= j) s.M.block(r * d2, (p + j) * d2, d2, d2) = kron(H[r - j].transpose(), eye);
    }
  }
  if (condition_number(s.M) > 1e12) fail(ErrorKind::RankDeficientM, "M is numerically singular");

  Matrix K = Matrix::Zero(N * d, N * d);
  Matrix rhs(N * d, d);
  for (int a = 0; a < p; ++a) {
    for (int c = 0; c < N; ++c) K.block(a * d, c * d, d, d) = at(G, q + a - c, zero);
    rhs.block(a * d, 0, d, d) = G[q + a + 1];
  }
  for (int b = 0; b < q; ++b) {
    for (int c = 0; c < N; ++c) K.block((p + b) * d, c * d, d, d) = at(H, p + b - c, zero);
    rhs.block((p + b) * d, 0, d, d) = H[p + b + 1];
  }
  if (condition_number(K) > 1e12) {
    fail(ErrorKind::SingularBlockMatrix, "the matrix defining D(L) is numerically singular");
  }
  const Matrix d_stack = -K.partialPivLu().solve(rhs);
  s.D.reserve(N);
  for (int i = 0; i < N; ++i) s.D.push_back(d_stack.block(i * d, 0, d, d).transpose());

  const auto E = green_matrices(std::span<const Matrix>(s.D), d, OperatorKind::MA, horizon, false);

  s.fundamental = Matrix::Zero(m * d, N * d);
  for (int t = 1; t <= m; ++t) {
    for (int k = 1; k <= std::min(N, t); ++k) s.fundamental.block((t - 1) * d, (k - 1) * d, d, d) = E[t - k];
  }
  s.casorati = Matrix::Zero(N * d, N * d);
  for (int t = 1; t <= N; ++t) {
    for (int k = 1; k <= t; ++k) s.casorati.block((t - 1) * d, (k - 1) * d, d, d) = E[t - k];
  }
  s.P = kron(s.casorati.inverse(), eye);

  // V_u = sum_j B_j' E_{u-j} (B_0 = I);  U_w = sum_a V_a (x) H_{w-a}.
  std::vector<Matrix> V(m, Matrix::Zero(d, d));
  for (int u = 0; u < m; ++u) {
    for (int j = 0; j <= std::min(q, u); ++j) V[u].noalias() += (j == 0 ? eye : spec.ma()[j - 1].transpose()) * E[u - j];
  }
  std::vector<Matrix> U(m, Matrix::Zero(d2, d2));
  for (int w = 0; w < m; ++w) {
    const int first = q == 0 ? w : 0;  // H_u = 0 for u > 0 when q = 0
    for (int a = first; a <= w; ++a) U[w] += kron(V[a], H[w - a]);
  }

  s.Q_blocks.assign(m, Matrix::Zero(d2, N * d2));
  for (int r = 1; r <= m; ++r) {
    for (int k = 1; k <= std::min(N, r); ++k) s.Q_blocks[r - 1].block(0, (k - 1) * d2, d2, d2) = U[r - k];
  }

  const Matrix mp = s.M.transpose() * s.P.transpose();
  s.T = Matrix::Zero(N * d2, m * d2);
  for (int r = 1; r <= m; ++r) {
    for (int k = 1; k <= std::min(N, r); ++k) {
      s.T.block(0, (r - 1) * d2, N * d2, d2).noalias() += mp.block(0, (k - 1) * d2, N * d2, d2) * U[r - k].transpose();
    }
  }
  return s;
}

Matrix jacobian_weights(const VarmaSpec& spec, int m) {
  if (m < 1) fail(ErrorKind::LagOutOfRange, "truncation lag must be at least 1");
  const int p = spec.p();
  const int q = spec.q();
  const int d = spec.d();
  const int d2 = d * d;
  const Matrix eye = Matrix::Identity(d, d);

  const auto H = green_matrices(spec, OperatorKind::MA, m, false);
  // VMA coefficients W_s = sum_i A_i W_{s-i} + B_s.
  std::vector<Matrix> W{eye};
  for (int s = 1; s < m; ++s) {
    Matrix w = s <= q ? spec.ma()[s - 1] : Matrix::Zero(d, d);
    for (int i = 1; i <= std::min(p, s); ++i) w.noalias() += spec.ar()[i - 1] * W[s - i];
    W.push_back(std::move(w));
  }

  Matrix T = Matrix::Zero((p + q) * d2, m * d2);
  for (int l = 1; l <= m; ++l) {
    for (int i = 1; i <= std::min(p, l); ++i) {
      Matrix block = Matrix::Zero(d2, d2);
      for (int s = 0; s <= l - i; ++s) block += kron(W[s], H[l - i - s].transpose());
      T.block((i - 1) * d2, (l - 1) * d2, d2, d2) = block;
    }
    for (int j = 1; j <= std::min(q, l); ++j) {
      T.block((p + j - 1) * d2, (l - 1) * d2, d2, d2) = kron(eye, H[l - j].transpose());
    }
  }
  return T;
}

}  // namespace varmarest
