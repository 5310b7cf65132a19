#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace varmarest {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// n x d, row t is the observation at time t+1.
using Series = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// VARMA(p, q) operator pair
///   (I - A_1 L - ... - A_p L^p) X_t = (I + B_1 L + ... + B_q L^q) eps_t
/// with parameter theta = (vec A_1', ..., vec A_p', vec B_1', ..., vec B_q')',
/// vec being column-major stacking. Immutable once built.
class VarmaSpec {
 public:
  VarmaSpec() = default;

  static VarmaSpec build(int p, int q, int d, std::vector<Matrix> ar, std::vector<Matrix> ma);
  static VarmaSpec from_theta(int p, int q, int d, const Vector& theta);

  /// Same orders, new coefficients.
  VarmaSpec with_theta(const Vector& theta) const { return from_theta(p_, q_, d_, theta); }

  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int d() const noexcept { return d_; }
  int num_params() const noexcept { return (p_ + q_) * d_ * d_; }

  const std::vector<Matrix>& ar() const noexcept { return ar_; }
  const std::vector<Matrix>& ma() const noexcept { return ma_; }
  const Vector& theta() const noexcept { return theta_; }

 private:
  int p_ = 0;
  int q_ = 0;
  int d_ = 0;
  std::vector<Matrix> ar_;
  std::vector<Matrix> ma_;
  Vector theta_;
};

VarmaSpec build_spec(int p, int q, int d, std::vector<Matrix> ar, std::vector<Matrix> ma);

struct StabilityReport {
  std::vector<double> ar_root_moduli;  // ascending
  std::vector<double> ma_root_moduli;  // ascending
  bool stationary = true;
  bool invertible = true;
  // Rank diagnostics |A_p| != 0 and |B_q| != 0; true when the order is zero.
  bool ar_leading_nonsingular = true;
  bool ma_leading_nonsingular = true;

  bool satisfies_a1() const noexcept { return stationary && invertible; }
};

inline constexpr double kDefaultStabilityTolerance = 1e-8;

/// Roots of det(I - sum A_i z^i) and det(I + sum B_j z^j) from companion
/// eigenvalues; a root is accepted as outside the unit ball when its modulus
/// exceeds 1 + tolerance.
StabilityReport check_assumption_a1(const VarmaSpec& spec,
                                    double tolerance = kDefaultStabilityTolerance);

enum class OperatorKind { AR, MA };

/// Green matrices G_0..G_H of the AR operator (G_u = sum A_i G_{u-i}) or
/// H_0..H_H of the MA operator (sum_{i=0}^q B_i H_{u-i} = 0, B_0 = I).
/// Throws NotStable when the norms keep growing over the last quarter of the
/// horizon; pass check_growth = false to skip that diagnostic.
std::vector<Matrix> green_matrices(std::span<const Matrix> coeffs, int d, OperatorKind kind,
                                   int horizon, bool check_growth = true);
std::vector<Matrix> green_matrices(const VarmaSpec& spec, OperatorKind kind, int horizon,
                                   bool check_growth = true);

/// Residuals Z_t(theta) = X_t - sum A_i X_{t-i} - sum B_j Z_{t-j}, all
/// pre-sample values zero.
Series residuals(const VarmaSpec& spec, const Series& series);

/// Inverse of residuals(): X_t = sum A_i X_{t-i} + eps_t + sum B_j eps_{t-j}
/// with zero pre-sample values.
Series filter_innovations(const VarmaSpec& spec, const Series& innovations);

/// Produces `rows` x d innovations deterministically from a seed.
using InnovationSource = std::function<Series(std::size_t rows, std::uint64_t seed)>;

inline constexpr int kDefaultBurnIn = 200;

/// Stationary path of length n: the recursion runs burn_in + n steps from
/// zeros and the first burn_in rows are dropped. Throws NotStationary.
Series simulate(const VarmaSpec& spec, const InnovationSource& innovations, std::size_t n,
                std::size_t burn_in, std::uint64_t seed);

}  // namespace varmarest
