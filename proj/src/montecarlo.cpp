#include "varmarest/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Cholesky>

#include "varmarest/error.hpp"
#include "varmarest/rng.hpp"

namespace varmarest {

namespace {

Matrix cholesky_factor(const Matrix& sigma, const std::string& what) {
  if (sigma.rows() != sigma.cols()) fail(ErrorKind::BadCovariance, what + " is not square");
  if (!sigma.allFinite() || !sigma.isApprox(sigma.transpose(), 1e-12)) {
    fail(ErrorKind::BadCovariance, what + " is not symmetric");
  }
  const Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) fail(ErrorKind::BadCovariance, what + " is not positive definite");
  return llt.matrixL();
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Skew-normal draws: xi + w (delta |U0| + (Omega_bar - delta delta')^1/2 U),
// divided by sqrt(V / nu) for the skew-t.
struct SkewParts {
  Vector w;
  Vector delta;
  Matrix root;
};

SkewParts skew_parts(const InnovationSampler& s) {
  const int d = s.d;
  if (s.xi.size() != d || s.alpha.size() != d || s.omega.rows() != d) {
    fail(ErrorKind::DomainError, "skew parameters have the wrong dimension");
  }
  cholesky_factor(s.omega, "skew scale matrix");
  SkewParts parts;
  parts.w = s.omega.diagonal().cwiseSqrt();
  const Matrix omega_bar = parts.w.cwiseInverse().asDiagonal() * s.omega * parts.w.cwiseInverse().asDiagonal();
  const Vector oa = omega_bar * s.alpha;
  parts.delta = oa / std::sqrt(1.0 + s.alpha.dot(oa));
  parts.root = cholesky_factor(omega_bar - parts.delta * parts.delta.transpose(), "skew residual covariance");
  return parts;
}

}  // namespace

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::SphericalGaussian: return "spherical_gaussian";
    case SamplerKind::SphericalT: return "spherical_t";
    case SamplerKind::Gaussian: return "gaussian";
    case SamplerKind::Mixture: return "mixture";
    case SamplerKind::SkewNormal: return "skew_normal";
    case SamplerKind::SkewT: return "skew_t";
  }
  return "unknown";
}

InnovationSampler spherical_gaussian_sampler(int d) {
  InnovationSampler s;
  s.kind = SamplerKind::SphericalGaussian;
  s.d = d;
  return s;
}

InnovationSampler spherical_t_sampler(int d, double nu) {
  InnovationSampler s;
  s.kind = SamplerKind::SphericalT;
  s.d = d;
  s.nu = nu;
  return s;
}

InnovationSampler gaussian_sampler(Matrix sigma) {
  InnovationSampler s;
  s.kind = SamplerKind::Gaussian;
  s.d = static_cast<int>(sigma.rows());
  s.sigma = std::move(sigma);
  return s;
}

InnovationSampler mixture_sampler(std::vector<double> weights, std::vector<Vector> means,
                                  std::vector<Matrix> covariances) {
  InnovationSampler s;
  s.kind = SamplerKind::Mixture;
  s.d = means.empty() ? 0 : static_cast<int>(means.front().size());
  s.weights = std::move(weights);
  s.means = std::move(means);
  s.covariances = std::move(covariances);
  return s;
}

InnovationSampler skew_normal_sampler(Vector xi, Matrix omega, Vector alpha) {
  InnovationSampler s;
  s.kind = SamplerKind::SkewNormal;
  s.d = static_cast<int>(xi.size());
  s.xi = std::move(xi);
  s.omega = std::move(omega);
  s.alpha = std::move(alpha);
  s.center = CenterMode::SampleMean;
  return s;
}

InnovationSampler skew_t_sampler(Vector xi, Matrix omega, Vector alpha, double nu) {
  InnovationSampler s = skew_normal_sampler(std::move(xi), std::move(omega), std::move(alpha));
  s.kind = SamplerKind::SkewT;
  s.nu = nu;
  return s;
}

InnovationSampler named_sampler(const std::string& name, int d) {
  if (name == "gaussian" || name == "spherical_gaussian") return spherical_gaussian_sampler(d);
  if (name == "t3" || name == "spherical_t3") return spherical_t_sampler(d, 3.0);
  if (d == 2) {
    if (name == "mixture") {
      return mixture_sampler({3.0 / 8.0, 3.0 / 8.0, 1.0 / 4.0}, {vec({-5, 0}), vec({5, 0}), vec({0, 0})},
                             {mat2(7, 5, 5, 5), mat2(7, -6, -6, 6), mat2(4, 0, 0, 3)});
    }
    if (name == "nonspherical_gaussian") return gaussian_sampler(mat2(5, 4, 4, 4.5));
    if (name == "skew_normal") return skew_normal_sampler(vec({0, 0}), mat2(7, 4, 4, 5), vec({5, 2}));
    if (name == "skew_t3") return skew_t_sampler(vec({0, 0}), mat2(7, 4, 4, 5), vec({5, 2}), 3.0);
  }
  if (d == 3 && name == "mixture") {
    Matrix s1(3, 3), s2(3, 3), s3 = Matrix::Zero(3, 3);
    s1 << 7, 3, 5, 3, 6, 1, 5, 1, 7;
    s2 << 7, -5, -3, -5, 7, 4, -3, 4, 5;
    s3.diagonal() << 4, 3, 1;
    return mixture_sampler({3.0 / 8.0, 3.0 / 8.0, 1.0 / 4.0}, {vec({-5, -5, 0}), vec({5, 5, 2}), vec({0, 0, -3})},
                           {s1, s2, s3});
  }
  fail(ErrorKind::ConfigError, "unknown sampler '" + name + "' for d = " + std::to_string(d));
}

void validate(const InnovationSampler& s) {
  if (s.d < 1) fail(ErrorKind::DomainError, "sampler dimension must be positive");
  switch (s.kind) {
    case SamplerKind::SphericalGaussian: break;
    case SamplerKind::SphericalT:
      if (!(s.nu > 0.0)) fail(ErrorKind::DomainError, "degrees of freedom must be positive");
      break;
    case SamplerKind::Gaussian:
      if (s.sigma.rows() != s.d) fail(ErrorKind::DomainError, "covariance has the wrong dimension");
      cholesky_factor(s.sigma, "covariance");
      break;
    case SamplerKind::Mixture: {
      if (s.weights.empty() || s.weights.size() != s.means.size() || s.weights.size() != s.covariances.size()) {
        fail(ErrorKind::DomainError, "mixture needs matching weights, means and covariances");
      }
      double total = 0.0;
      for (std::size_t c = 0; c < s.weights.size(); ++c) {
        if (!(s.weights[c] >= 0.0)) fail(ErrorKind::DomainError, "mixture weights must be non-negative");
        if (s.means[c].size() != s.d || s.covariances[c].rows() != s.d) {
          fail(ErrorKind::DomainError, "mixture component has the wrong dimension");
        }
        cholesky_factor(s.covariances[c], "mixture covariance " + std::to_string(c + 1));
        total += s.weights[c];
      }
      if (std::abs(total - 1.0) > 1e-9) fail(ErrorKind::DomainError, "mixture weights must sum to 1");
      break;
    }
    case SamplerKind::SkewNormal:
    case SamplerKind::SkewT:
      if (s.kind == SamplerKind::SkewT && !(s.nu > 0.0)) fail(ErrorKind::DomainError, "degrees of freedom must be positive");
      skew_parts(s);
      break;
  }
}

Series sample_innovations(const InnovationSampler& s, std::size_t n, std::uint64_t seed) {
  validate(s);
  const int d = s.d;
  CounterRng rng(stream_seed(seed, 0x696e6e6f76ULL));
  std::normal_distribution<double> normal;
  auto gaussian_row = [&](Vector& out) {
    for (int k = 0; k < d; ++k) out(k) = normal(rng);
  };
  Series out(static_cast<Eigen::Index>(n), d);
  Vector u(d);

  switch (s.kind) {
    case SamplerKind::SphericalGaussian:
      for (std::size_t t = 0; t < n; ++t) {
        gaussian_row(u);
        out.row(t) = u.transpose();
      }
      break;
    case SamplerKind::SphericalT: {
      std::chi_squared_distribution<double> chi2(s.nu);
      for (std::size_t t = 0; t < n; ++t) {
        gaussian_row(u);
        out.row(t) = u.transpose() / std::sqrt(chi2(rng) / s.nu);
      }
      break;
    }
    case SamplerKind::Gaussian: {
      const Matrix L = cholesky_factor(s.sigma, "covariance");
      for (std::size_t t = 0; t < n; ++t) {
        gaussian_row(u);
        out.row(t) = (L * u).transpose();
      }
      break;
    }
    case SamplerKind::Mixture: {
      std::vector<Matrix> roots;
      for (const Matrix& c : s.covariances) roots.push_back(cholesky_factor(c, "mixture covariance"));
      std::discrete_distribution<std::size_t> pick(s.weights.begin(), s.weights.end());
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t c = pick(rng);
        gaussian_row(u);
        out.row(t) = (s.means[c] + roots[c] * u).transpose();
      }
      break;
    }
    case SamplerKind::SkewNormal:
    case SamplerKind::SkewT: {
      const SkewParts parts = skew_parts(s);
      std::chi_squared_distribution<double> chi2(s.kind == SamplerKind::SkewT ? s.nu : 1.0);
      for (std::size_t t = 0; t < n; ++t) {
        const double u0 = std::abs(normal(rng));
        gaussian_row(u);
        Vector z = parts.delta * u0 + parts.root * u;
        if (s.kind == SamplerKind::SkewT) z /= std::sqrt(chi2(rng) / s.nu);
        out.row(t) = (s.xi + parts.w.cwiseProduct(z)).transpose();
      }
      break;
    }
  }

  if (s.center == CenterMode::SampleMean && n > 0) out.rowwise() -= out.colwise().mean();
  return out;
}

InnovationSource innovation_source(const InnovationSampler& sampler) {
  return [sampler](std::size_t rows, std::uint64_t seed) { return sample_innovations(sampler, rows, seed); };
}

std::vector<int> ao_positions(int n, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) fail(ErrorKind::DomainError, "outlier fraction must lie in (0, 1)");
  const int count = static_cast<int>(std::floor(fraction * n));
  std::vector<int> positions;
  for (int j = 0; j < count; ++j) {
    positions.push_back(static_cast<int>(std::floor((j + 0.5) * n / count)));
  }
  return positions;
}

Series contaminate_ao(const Series& series, double fraction, const Vector& xi) {
  if (xi.size() != series.cols()) fail(ErrorKind::DimensionMismatch, "outlier size has the wrong dimension");
  Series out = series;
  for (int t : ao_positions(static_cast<int>(series.rows()), fraction)) out.row(t) += xi.transpose();
  if (out.rows() > 0) out.rowwise() -= out.colwise().mean();
  return out;
}

const EstimatorSummary& MonteCarloReport::at(const std::string& name) const {
  for (const auto& e : estimators) {
    if (e.name == name) return e;
  }
  fail(ErrorKind::ConfigError, "estimator '" + name + "' not in report");
}

int default_thread_count() {
  if (const char* env = std::getenv("VARMA_REST_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Replication {
  bool ok = false;
  std::string error;
  std::vector<Vector> estimates;  // one per estimator
};

Replication run_replication(const StudyDesign& design, std::uint64_t rep) {
  Replication out;
  try {
    const std::uint64_t seed = stream_seed(design.seed, rep);
    Series x = simulate(design.spec, innovation_source(design.sampler), design.n, design.burn_in, seed);
    if (design.outliers) x = contaminate_ao(x, design.outliers->fraction, design.outliers->xi);
    for (const std::string& name : design.estimators) {
      if (name == "ols" || name == "prelim") {
        out.estimates.push_back(preliminary_estimate(x, design.spec.p(), design.spec.q()));
      } else {
        EstimationOptions opt;
        opt.p = design.spec.p();
        opt.q = design.spec.q();
        opt.scores = name;
        opt.iterations = design.iterations;
        opt.seed = seed;
        opt.covariance = false;
        out.estimates.push_back(r_estimate(x, opt).theta_tilde);
      }
    }
    out.ok = true;
  } catch (const Error& e) {
    out.error = "replication " + std::to_string(rep) + ": " + e.what();
  }
  return out;
}

}  // namespace

MonteCarloReport run_study(const StudyDesign& design) {
  if (design.replications < 1) fail(ErrorKind::ConfigError, "need at least one replication");
  if (design.estimators.empty()) fail(ErrorKind::ConfigError, "no estimators requested");
  for (const auto& name : design.estimators) {
    if (name != "ols" && name != "prelim") scores_by_name(name, design.spec.d());
  }
  validate(design.sampler);
  if (design.sampler.d != design.spec.d()) fail(ErrorKind::DimensionMismatch, "sampler and model dimensions differ");

  const int wanted = design.replications;
  const int allowed_failures = static_cast<int>(std::floor(0.02 * wanted));
  const int threads = std::max(1, design.threads > 0 ? design.threads : default_thread_count());

  std::vector<Replication> results;
  int completed = 0;
  int failed = 0;
  std::vector<std::string> messages;
  while (completed < wanted) {
    const std::size_t first = results.size();
    const std::size_t batch = static_cast<std::size_t>(wanted - completed);
    results.resize(first + batch);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < batch; i = next++) results[first + i] = run_replication(design, first + i);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::min<int>(threads, static_cast<int>(batch)); ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (std::size_t i = first; i < results.size(); ++i) {
      if (results[i].ok) {
        ++completed;
      } else {
        ++failed;
        messages.push_back(results[i].error);
      }
    }
    if (failed > allowed_failures) {
      fail(ErrorKind::ReplicationFailed, std::to_string(failed) + " of " + std::to_string(results.size()) +
                                             " replications failed; first: " + messages.front());
    }
  }

  MonteCarloReport report;
  report.design = design.name;
  report.n = design.n;
  report.replications = wanted;
  report.attempted = static_cast<int>(results.size());
  report.failed = failed;
  report.seed = design.seed;
  report.baseline = design.estimators.front();
  report.truth = design.spec.theta();
  report.failure_messages = std::move(messages);

  const Eigen::Index k = report.truth.size();
  for (std::size_t e = 0; e < design.estimators.size(); ++e) {
    EstimatorSummary summary;
    summary.name = design.estimators[e];
    summary.bias = Vector::Zero(k);
    summary.mse = Vector::Zero(k);
    for (const Replication& r : results) {
      if (!r.ok) continue;
      const Vector err = r.estimates[e] - report.truth;
      summary.bias += err;
      summary.mse += err.cwiseAbs2();
    }
    summary.bias /= wanted;
    summary.mse /= wanted;
    summary.mse_sum = summary.mse.sum();
    report.estimators.push_back(std::move(summary));
  }
  const double base = report.estimators.front().mse_sum;
  for (auto& s : report.estimators) s.ratio = base / s.mse_sum;
  return report;
}

std::string report_table_csv(const MonteCarloReport& report) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "estimator,param,bias_e3,mse_e3\n";
  for (const auto& e : report.estimators) {
    for (Eigen::Index i = 0; i < e.bias.size(); ++i) {
      out << e.name << ",theta" << (i + 1) << ',' << 1e3 * e.bias(i) << ',' << 1e3 * e.mse(i) << '\n';
    }
  }
  return out.str();
}

std::string report_ratios_csv(const MonteCarloReport& report) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "estimator,mse_sum_e3,ratio\n";
  for (const auto& e : report.estimators) out << e.name << ',' << 1e3 * e.mse_sum << ',' << e.ratio << '\n';
  return out.str();
}

}  // namespace varmarest
