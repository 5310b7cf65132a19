#pragma once

#include <vector>

#include "varmarest/model.hpp"

namespace varmarest {

/// Linear maps turning the lagged cross-covariance stack into the central
/// sequence of a VARMA(p, q) model, N = p + q:
///   M  (N d^2 square)  AR and MA Green matrices, transposed, in lower
///                      block-Toeplitz form;
///   P  (N d^2 square)  inverse Casorati matrix of D(L), times I_d;
///   Q  (m d^2 x N d^2) H^(r) B'^(l) psi_bar, kept as m row blocks;
///   T = M' P' Q'       (N d^2 x m d^2).
struct StructuralMatrices {
  int p = 0;
  int q = 0;
  int d = 0;
  int m = 0;
  Matrix M;
  Matrix P;
  std::vector<Matrix> Q_blocks;
  Matrix T;

  /// D_1..D_N of D(L) = I + sum D_i L^i.
  std::vector<Matrix> D;
  /// psi_bar_N: the Casorati matrix (N d square, without the I_d factor).
  Matrix casorati;
  /// psi_bar_m, the fundamental system psi^(k)_t = E_{t-k} stacked (m d x N d).
  Matrix fundamental;
};

/// Requires A1 (throws NotStationary / NotStable otherwise) and m >= 1.
/// Throws SingularBlockMatrix when the matrix defining D(L) has condition
/// number above 1e12 and RankDeficientM when M does.
StructuralMatrices build_structural(const VarmaSpec& spec, int m);

/// T assembled directly from the derivative of the residual filter:
/// block (AR i, lag l) = sum_{s + r = l - i} W_s (x) H_r',
/// block (MA j, lag l) = I (x) H_{l-j}', W the VMA(inf) coefficients.
/// Independent of build_structural; used as a cross-check.
Matrix jacobian_weights(const VarmaSpec& spec, int m);

}  // namespace varmarest
