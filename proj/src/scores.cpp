#include "varmarest/scores.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "varmarest/error.hpp"
#include "varmarest/kernels.hpp"
#include "varmarest/special.hpp"

namespace varmarest {

namespace {

// Column-major n x d arrays a = J1 * S and b = J2 * S, so that
// Gamma_i(k, l) = (n-i)^-1 sum_t a_k[t] b_l[t-i].
struct WeightedSigns {
  int n = 0;
  int d = 0;
  std::vector<double> a;
  std::vector<double> b;
};

WeightedSigns weighted_signs(const RankSignProfile& profile, const ScorePair& scores) {
  const int n = profile.n;
  const int d = static_cast<int>(profile.signs.cols());
  std::vector<double> j1(profile.n_R + 1), j2(profile.n_R + 1);
  for (int j = 0; j <= profile.n_R; ++j) {
    const double u = static_cast<double>(j) / (profile.n_R + 1);
    j1[j] = scores.j1(u);
    j2[j] = scores.j2(u);
  }
  WeightedSigns w{n, d, std::vector<double>(static_cast<std::size_t>(n) * d),
                  std::vector<double>(static_cast<std::size_t>(n) * d)};
  for (int t = 0; t < n; ++t) {
    const int r = profile.ranks[t];
    if (r < 0 || r > profile.n_R) fail(ErrorKind::RankOutOfRange, "profile rank out of range");
    for (int k = 0; k < d; ++k) {
      w.a[static_cast<std::size_t>(k) * n + t] = j1[r] * profile.signs(t, k);
      w.b[static_cast<std::size_t>(k) * n + t] = j2[r] * profile.signs(t, k);
    }
  }
  return w;
}

WeightedSigns weighted_oracle_signs(const Series& residuals, const RadialCdf& radial_cdf,
                                    const ScorePair& scores) {
  const int n = static_cast<int>(residuals.rows());
  const int d = static_cast<int>(residuals.cols());
  const double below_one = std::nextafter(1.0, 0.0);
  WeightedSigns w{n, d, std::vector<double>(static_cast<std::size_t>(n) * d),
                  std::vector<double>(static_cast<std::size_t>(n) * d)};
  for (int t = 0; t < n; ++t) {
    const double norm = residuals.row(t).norm();
    if (norm == 0.0) continue;
    const double u = std::min(radial_cdf(norm), below_one);
    const double s1 = scores.j1(u) / norm;
    const double s2 = scores.j2(u) / norm;
    for (int k = 0; k < d; ++k) {
      w.a[static_cast<std::size_t>(k) * n + t] = s1 * residuals(t, k);
      w.b[static_cast<std::size_t>(k) * n + t] = s2 * residuals(t, k);
    }
  }
  return w;
}

void check_lag(int lag, int n) {
  if (lag < 1 || lag > n - 1) {
    fail(ErrorKind::LagOutOfRange, "lag " + std::to_string(lag) + " outside 1.." + std::to_string(n - 1));
  }
}

Matrix cross_cov(const WeightedSigns& w, int lag) {
  check_lag(lag, w.n);
  const auto& dot = kernels::active().dot;
  const auto n = static_cast<std::size_t>(w.n);
  const auto len = n - lag;
  Matrix gamma(w.d, w.d);
  for (int l = 0; l < w.d; ++l) {
    for (int k = 0; k < w.d; ++k) {
      gamma(k, l) = dot(w.a.data() + k * n + lag, w.b.data() + l * n, len) / static_cast<double>(len);
    }
  }
  return gamma;
}

Vector cross_cov_stack(const WeightedSigns& w, int m) {
  check_lag(m, w.n);
  const int d2 = w.d * w.d;
  Vector stack(static_cast<Eigen::Index>(m) * d2);
  for (int i = 1; i <= m; ++i) {
    const Matrix gamma = cross_cov(w, i);
    stack.segment(static_cast<Eigen::Index>(i - 1) * d2, d2) = std::sqrt(static_cast<double>(w.n - i)) * gamma.reshaped();
  }
  return stack;
}

ScorePair symmetric(std::string name, ScoreFunction j, double sigma2) {
  return ScorePair{std::move(name), j, j, sigma2, sigma2};
}

}  // namespace

ScorePair sign_scores() {
  return symmetric("sign", [](double) { return 1.0; }, 1.0);
}

ScorePair spearman_scores() {
  return symmetric("spearman", [](double u) { return u; }, 1.0 / 3.0);
}

ScorePair vdw_scores(int d) {
  if (d < 1) fail(ErrorKind::DomainError, "vdW scores need d >= 1");
  const double dof = d;
  return symmetric("vdw", [dof](double u) { return std::sqrt(chi2_quantile(u, dof)); }, dof);
}

ScorePair custom_scores(std::string name, ScoreFunction j1, ScoreFunction j2, double sigma2_j1,
                        double sigma2_j2) {
  if (!(std::isfinite(sigma2_j1) && sigma2_j1 > 0.0 && std::isfinite(sigma2_j2) && sigma2_j2 > 0.0)) {
    fail(ErrorKind::DomainError, "score second moments must be finite and positive");
  }
  if (!j1 || !j2) fail(ErrorKind::DomainError, "score functions must be callable");
  return ScorePair{std::move(name), std::move(j1), std::move(j2), sigma2_j1, sigma2_j2};
}

ScorePair scores_by_name(const std::string& name, int d) {
  if (name == "sign") return sign_scores();
  if (name == "spearman") return spearman_scores();
  if (name == "vdw" || name == "van_der_waerden") return vdw_scores(d);
  fail(ErrorKind::ConfigError, "unknown scores '" + name + "' (expected sign, spearman or vdw)");
}

Matrix rank_cross_cov(const RankSignProfile& profile, const ScorePair& scores, int lag) {
  check_lag(lag, profile.n);
  return cross_cov(weighted_signs(profile, scores), lag);
}

Vector rank_cross_cov_stack(const RankSignProfile& profile, const ScorePair& scores, int m) {
  return cross_cov_stack(weighted_signs(profile, scores), m);
}

Matrix oracle_cross_cov(const Series& residuals, const RadialCdf& radial_cdf, const ScorePair& scores,
                        int lag) {
  check_lag(lag, static_cast<int>(residuals.rows()));
  return cross_cov(weighted_oracle_signs(residuals, radial_cdf, scores), lag);
}

Vector oracle_cross_cov_stack(const Series& residuals, const RadialCdf& radial_cdf,
                              const ScorePair& scores, int m) {
  return cross_cov_stack(weighted_oracle_signs(residuals, radial_cdf, scores), m);
}

}  // namespace varmarest
