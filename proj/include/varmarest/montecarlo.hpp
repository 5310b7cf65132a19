#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "varmarest/inference.hpp"
#include "varmarest/model.hpp"

namespace varmarest {

enum class SamplerKind { SphericalGaussian, SphericalT, Gaussian, Mixture, SkewNormal, SkewT };
enum class CenterMode { None, SampleMean };

std::string_view to_string(SamplerKind kind);

struct InnovationSampler {
  SamplerKind kind = SamplerKind::SphericalGaussian;
  int d = 2;
  double nu = 3.0;                  // spherical_t, skew_t
  Matrix sigma;                     // gaussian
  std::vector<double> weights;      // mixture
  std::vector<Vector> means;        // mixture
  std::vector<Matrix> covariances;  // mixture
  Vector xi;                        // skew location
  Matrix omega;                     // skew scale matrix; w = sqrt(diag(omega))
  Vector alpha;                     // skew shape
  CenterMode center = CenterMode::None;
};

InnovationSampler spherical_gaussian_sampler(int d);
InnovationSampler spherical_t_sampler(int d, double nu);
InnovationSampler gaussian_sampler(Matrix sigma);
InnovationSampler mixture_sampler(std::vector<double> weights, std::vector<Vector> means,
                                  std::vector<Matrix> covariances);
InnovationSampler skew_normal_sampler(Vector xi, Matrix omega, Vector alpha);
InnovationSampler skew_t_sampler(Vector xi, Matrix omega, Vector alpha, double nu);

/// Built-in designs: "gaussian", "t3", "mixture", "skew_normal", "skew_t3",
/// "nonspherical_gaussian" (d = 2), and "gaussian", "mixture" for d = 3.
/// Skew designs are centered at the sample mean. Throws ConfigError.
InnovationSampler named_sampler(const std::string& name, int d);

/// Throws BadCovariance when a covariance is not positive definite and
/// DomainError on malformed mixture weights or dimensions.
void validate(const InnovationSampler& sampler);

/// n x d innovations, a deterministic function of (sampler, n, seed).
Series sample_innovations(const InnovationSampler& sampler, std::size_t n, std::uint64_t seed);

InnovationSource innovation_source(const InnovationSampler& sampler);

/// Adds xi to floor(fraction n) equally spaced rows, then demeans every column.
Series contaminate_ao(const Series& series, double fraction, const Vector& xi);
/// Rows receiving the outlier, in increasing order.
std::vector<int> ao_positions(int n, double fraction);

struct AdditiveOutliers {
  double fraction = 0.05;
  Vector xi;
};

struct StudyDesign {
  std::string name;
  VarmaSpec spec;
  InnovationSampler sampler;
  int n = 300;
  int replications = 100;
  /// Subset of "ols" (baseline), "vdw", "spearman", "sign".
  std::vector<std::string> estimators{"ols", "vdw", "spearman"};
  std::optional<int> iterations;
  std::uint64_t seed = 1;
  std::optional<AdditiveOutliers> outliers;
  int burn_in = kDefaultBurnIn;
  /// 0: VARMA_REST_THREADS, else hardware concurrency.
  int threads = 0;
};

struct EstimatorSummary {
  std::string name;
  Vector bias;  // mean of (estimate - truth)
  Vector mse;   // mean of (estimate - truth)^2
  double mse_sum = 0.0;
  /// baseline mse_sum / this mse_sum
  double ratio = 0.0;
};

struct MonteCarloReport {
  std::string design;
  int n = 0;
  int replications = 0;
  int attempted = 0;
  int failed = 0;
  std::uint64_t seed = 0;
  std::string baseline;
  Vector truth;
  std::vector<EstimatorSummary> estimators;
  std::vector<std::string> failure_messages;

  const EstimatorSummary& at(const std::string& name) const;
};

/// Replication r draws from stream_seed(seed, r). Failed replications (any
/// estimator throwing) are replaced by further indices; the study aborts with
/// ReplicationFailed once failures exceed 2% of the requested count. The
/// report is identical for every thread count.
MonteCarloReport run_study(const StudyDesign& design);

/// Thread count from VARMA_REST_THREADS, falling back to the hardware.
int default_thread_count();

/// Long-format table: estimator,param,bias_e3,mse_e3.
std::string report_table_csv(const MonteCarloReport& report);
/// estimator,mse_sum_e3,ratio
std::string report_ratios_csv(const MonteCarloReport& report);

}  // namespace varmarest
