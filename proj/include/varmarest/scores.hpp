#pragma once

#include <functional>
#include <string>
#include <vector>

#include "varmarest/model.hpp"
#include "varmarest/transport.hpp"

namespace varmarest {

using ScoreFunction = std::function<double(double)>;

/// Score functions J1, J2 on [0, 1) with their second moments
/// sigma2 = int_0^1 J(u)^2 du.
struct ScorePair {
  std::string name;
  ScoreFunction j1;
  ScoreFunction j2;
  double sigma2_j1 = 1.0;
  double sigma2_j2 = 1.0;
};

/// J1 = J2 = 1.
ScorePair sign_scores();
/// J1(u) = J2(u) = u.
ScorePair spearman_scores();
/// J1(u) = J2(u) = sqrt(chi2_quantile(u, d)).
ScorePair vdw_scores(int d);
/// User scores; monotonicity is the caller's responsibility. Throws
/// DomainError unless both sigma2 values are finite and positive.
ScorePair custom_scores(std::string name, ScoreFunction j1, ScoreFunction j2, double sigma2_j1,
                        double sigma2_j2);

/// "sign" | "spearman" | "vdw" (alias "van_der_waerden"). Throws ConfigError.
ScorePair scores_by_name(const std::string& name, int d);

/// Gamma_i = (n-i)^-1 sum_{t>i} J1(R_t/(n_R+1)) J2(R_{t-i}/(n_R+1)) S_t S_{t-i}'.
/// Throws LagOutOfRange unless 1 <= i <= n-1.
Matrix rank_cross_cov(const RankSignProfile& profile, const ScorePair& scores, int lag);

/// Column block i-1 holds sqrt(n-i) vec Gamma_i for i = 1..m, stacked into
/// one vector of length m d^2. Uses the active dot-product kernel.
Vector rank_cross_cov_stack(const RankSignProfile& profile, const ScorePair& scores, int m);

/// Same form as rank_cross_cov with the exact center-outward values of a
/// spherical reference (radial CDF known) in place of the empirical ones.
Matrix oracle_cross_cov(const Series& residuals, const RadialCdf& radial_cdf, const ScorePair& scores,
                        int lag);
Vector oracle_cross_cov_stack(const Series& residuals, const RadialCdf& radial_cdf,
                              const ScorePair& scores, int m);

}  // namespace varmarest
