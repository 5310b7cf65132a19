#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "varmarest/model.hpp"
#include "varmarest/scores.hpp"
#include "varmarest/structural.hpp"
#include "varmarest/transport.hpp"

namespace varmarest {

struct CentralSequence {
  Vector delta;
  /// sqrt(n-i) vec Gamma_i for i = 1..m.
  Vector gamma_stack;
  int m = 0;
  int n = 0;
  RankSignProfile profile;
};

/// Residuals at spec.theta(), coupling to `grid`, rank cross-covariances up to
/// lag m (default n - 1) and delta = T gamma_stack.
CentralSequence central_sequence(const VarmaSpec& spec, const Series& series, const CenterOutwardGrid& grid,
                                 const ScorePair& scores, std::optional<int> m = std::nullopt);
CentralSequence central_sequence(const VarmaSpec& spec, const Vector& theta, const Series& series,
                                 const CenterOutwardGrid& grid, const ScorePair& scores,
                                 std::optional<int> m = std::nullopt);

/// Pure VAR central sequence by backward recursion on the cross-covariance
/// blocks S_k = sqrt(n-k) Gamma_k: R_k = S_k + sum_l R_{k+l} A_l' (R_k = 0
/// beyond m), delta_i = vec R_i. Throws NotPureVar when q > 0.
Vector var_central_sequence_direct(const VarmaSpec& spec, const Series& series, const ScorePair& scores,
                                   const CenterOutwardGrid& grid, std::optional<int> m = std::nullopt);
/// Same recursion applied to an explicit stack of blocks.
Vector var_central_sequence_from_stack(const VarmaSpec& spec, const Vector& gamma_stack, int m);

struct CrossInformation {
  Matrix upsilon;
  /// Columns whose forward step left the A1 region and were taken backward.
  std::vector<int> reversed_columns;
};

/// Column i of -upsilon is delta(theta + n^-1/2 e_i) - delta(theta). When the
/// forward point violates A1 the step -n^-1/2 e_i is used with the sign of
/// the difference flipped; if both fail, throws PerturbedModelUnstable.
CrossInformation estimate_cross_information(const VarmaSpec& spec, const Series& series,
                                            const CenterOutwardGrid& grid, const ScorePair& scores,
                                            std::optional<int> m = std::nullopt,
                                            const CentralSequence* at_theta = nullptr);

/// theta + n^-1/2 upsilon^-1 delta. Throws SingularUpsilon.
Vector one_step(const Vector& theta, const Matrix& upsilon, const Vector& delta, int n);

enum class PrelimMethod { Auto, OlsVar, HannanRissanen };

std::string_view to_string(PrelimMethod method);
PrelimMethod parse_prelim_method(std::string_view name);

/// Least squares without intercept. OlsVar requires q = 0; HannanRissanen
/// first fits a long AR of order ceil(1.5 sqrt(n)) and regresses on lagged
/// observations and the resulting residual proxies. Auto picks by q.
/// Throws SingularRegressorMatrix, and PreliminaryFailed when the fit
/// violates A1.
Vector preliminary_estimate(const Series& series, int p, int q, PrelimMethod method = PrelimMethod::Auto);

struct CovarianceEstimate {
  Matrix omega;
  Vector std_errors;
};

/// omega = d^-2 sigma2_J1 sigma2_J2 upsilon^-1 T T' upsilon^-T,
/// std_errors = sqrt(diag(omega) / n). Throws SingularUpsilon.
CovarianceEstimate estimate_covariance(const Matrix& upsilon, const Matrix& T, const ScorePair& scores, int d,
                                       int n);

struct IterationRecord {
  Vector theta;        // point at which delta was evaluated
  double delta_norm;   // ||delta(theta)||
  double step_scale;   // 1, or the halved factor keeping the update in A1
};

struct EstimationOptions {
  int p = 1;
  int q = 0;
  std::string scores = "vdw";
  std::optional<int> iterations;  // 5 for n >= 1000, 10 otherwise
  PrelimMethod prelim = PrelimMethod::Auto;
  std::optional<GridStrategy> grid;
  std::uint64_t seed = 0;
  std::optional<int> m;
  std::optional<int> n_R;
  std::optional<int> n_S;
  bool covariance = true;
};

struct EstimationResult {
  int p = 0;
  int q = 0;
  int d = 0;
  int n = 0;
  std::string scores;
  GridFactorization factorization;
  Vector theta_prelim;
  Vector theta_tilde;
  std::vector<IterationRecord> iterations;
  Matrix upsilon;
  std::vector<int> reversed_columns;
  Matrix omega;
  Vector std_errors;
  /// Ranks and signs at theta_tilde's predecessor (the last evaluated point).
  RankSignProfile last_profile;
};

/// One-step R-estimation iterated k times. Upsilon is estimated once at the
/// preliminary estimate and reused; ranks and signs are recomputed at every
/// evaluation of delta. An update leaving the A1 region is halved until it
/// returns (at most 30 times).
EstimationResult r_estimate(const Series& series, const EstimationOptions& options);

}  // namespace varmarest
