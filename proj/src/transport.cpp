#include "varmarest/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "varmarest/assignment.hpp"
#include "varmarest/error.hpp"
#include "varmarest/kernels.hpp"
#include "varmarest/rng.hpp"
#include "varmarest/special.hpp"

namespace varmarest {

namespace {

bool feasible(int n, int n_R, int n_S) {
  if (n_R < 1 || n_S < 1) return false;
  const long long n_0 = static_cast<long long>(n) - static_cast<long long>(n_R) * n_S;
  return n_0 >= 0 && n_0 < std::min(n_R, n_S);
}

std::optional<GridFactorization> factorize_near_root(int n, int d) {
  const double target = std::pow(static_cast<double>(n), 1.0 / d);
  const int upper = static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(n))));
  std::optional<GridFactorization> best;
  for (int n_R = 2; n_R <= upper; ++n_R) {
    const int n_S = n / n_R;
    if (!feasible(n, n_R, n_S)) continue;
    const GridFactorization f{n_R, n_S, n - n_R * n_S};
    if (!best || f.n_0 < best->n_0 ||
        (f.n_0 == best->n_0 && std::abs(n_R - target) < std::abs(best->n_R - target))) {
      best = f;
    }
  }
  return best;
}

std::optional<GridFactorization> factorize_plane(int n) {
  const int upper = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  std::optional<GridFactorization> best;
  for (int n_R = 2; n_R <= upper; ++n_R) {
    const int n_S = n / n_R;
    if (!feasible(n, n_R, n_S)) continue;
    const GridFactorization f{n_R, n_S, n - n_R * n_S};
    if (!best || f.n_0 <= best->n_0) best = f;  // ties go to the larger n_R
  }
  return best;
}

std::optional<GridFactorization> factorize_octahedral(int n) {
  const int min_radii = static_cast<int>(std::lround(std::cbrt(static_cast<double>(n))));
  std::optional<GridFactorization> best;
  for (int k = 1;; ++k) {
    const int n_S = 4 * k * k + 2;
    if (n_S > n) break;
    const int n_R = n / n_S;
    if (n_R < std::max(2, min_radii)) break;
    if (feasible(n, n_R, n_S)) best = GridFactorization{n_R, n_S, n - n_R * n_S};
  }
  return best;
}

}  // namespace

GridFactorization factorize_n(int n, int d, std::optional<int> n_R, std::optional<int> n_S) {
  if (n < 4) fail(ErrorKind::Infeasible, "need at least 4 observations, got " + std::to_string(n));
  if (d < 1) fail(ErrorKind::DimensionMismatch, "dimension must be positive");

  if (n_R || n_S) {
    const int radii = n_R ? *n_R : (*n_S > 0 ? n / *n_S : 0);
    const int directions = n_S ? *n_S : (radii > 0 ? n / radii : 0);
    if (!feasible(n, radii, directions)) {
      fail(ErrorKind::Infeasible, "n_R = " + std::to_string(radii) + ", n_S = " + std::to_string(directions) +
                                      " does not factorize n = " + std::to_string(n) +
                                      " with 0 <= n_0 < min(n_R, n_S)");
    }
    return {radii, directions, n - radii * directions};
  }

  std::optional<GridFactorization> f;
  if (d == 2) f = factorize_plane(n);
  if (d == 3) f = factorize_octahedral(n);
  if (!f) f = factorize_near_root(n, d);
  if (!f) fail(ErrorKind::Infeasible, "no factorization of n = " + std::to_string(n));
  return *f;
}

std::string_view to_string(GridStrategy strategy) {
  switch (strategy) {
    case GridStrategy::Regular2d: return "regular2d";
    case GridStrategy::Fibonacci3d: return "fibonacci3d";
    case GridStrategy::RandomSphere: return "random";
  }
  return "unknown";
}

GridStrategy parse_grid_strategy(std::string_view name) {
  if (name == "regular2d") return GridStrategy::Regular2d;
  if (name == "fibonacci3d") return GridStrategy::Fibonacci3d;
  if (name == "random" || name == "random_sphere") return GridStrategy::RandomSphere;
  fail(ErrorKind::ConfigError, "unknown grid strategy '" + std::string(name) + "'");
}

GridStrategy default_grid_strategy(int d) {
  if (d == 2) return GridStrategy::Regular2d;
  if (d == 3) return GridStrategy::Fibonacci3d;
  return GridStrategy::RandomSphere;
}

CenterOutwardGrid::CenterOutwardGrid(int d, int n_R, int n_S, int n_0, Series directions)
    : d_(d), n_R_(n_R), n_S_(n_S), n_0_(n_0), directions_(std::move(directions)) {
  if (n_R < 1 || n_S < 1 || n_0 < 0) fail(ErrorKind::DomainError, "grid needs n_R, n_S >= 1 and n_0 >= 0");
  if (directions_.rows() != n_S || directions_.cols() != d) {
    fail(ErrorKind::DimensionMismatch, "direction array must be n_S x d");
  }
  const int n = size();
  radii_.resize(n_R);
  for (int j = 1; j <= n_R; ++j) radii_[j - 1] = static_cast<double>(j) / (n_R + 1);
  points_ = Series::Zero(n, d);
  for (int j = 0; j < n_R; ++j) {
    for (int k = 0; k < n_S; ++k) points_.row(j * n_S + k) = radii_[j] * directions_.row(k);
  }
  soa_.resize(static_cast<std::size_t>(n) * d);
  for (int k = 0; k < d; ++k) {
    for (int g = 0; g < n; ++g) soa_[static_cast<std::size_t>(k) * n + g] = points_(g, k);
  }
}

CenterOutwardGrid make_grid(int n_R, int n_S, int n_0, int d, GridStrategy strategy, std::uint64_t seed) {
  if (d < 2) fail(ErrorKind::StrategyDimensionMismatch, "center-outward grids need d >= 2");
  Series dirs(n_S, d);
  switch (strategy) {
    case GridStrategy::Regular2d: {
      if (d != 2) fail(ErrorKind::StrategyDimensionMismatch, "regular2d requires d = 2");
      for (int k = 0; k < n_S; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n_S;
        dirs(k, 0) = std::cos(angle);
        dirs(k, 1) = std::sin(angle);
      }
      break;
    }
    case GridStrategy::Fibonacci3d: {
      if (d != 3) fail(ErrorKind::StrategyDimensionMismatch, "fibonacci3d requires d = 3");
      const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < n_S; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / n_S;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * k;
        dirs(k, 0) = r * std::cos(phi);
        dirs(k, 1) = r * std::sin(phi);
        dirs(k, 2) = z;
      }
      break;
    }
    case GridStrategy::RandomSphere: {
      CounterRng rng(stream_seed(seed, 0x6772696455ULL));
      std::normal_distribution<double> normal;
      for (int k = 0; k < n_S; ++k) {
        double norm = 0.0;
        do {
          for (int c = 0; c < d; ++c) dirs(k, c) = normal(rng);
          norm = dirs.row(k).norm();
        } while (norm < 1e-12);
        dirs.row(k) /= norm;
      }
      break;
    }
  }
  return CenterOutwardGrid(d, n_R, n_S, n_0, std::move(dirs));
}

CenterOutwardGrid make_grid_for(int n, int d, std::optional<GridStrategy> strategy, std::uint64_t seed) {
  const GridFactorization f = factorize_n(n, d);
  return make_grid(f.n_R, f.n_S, f.n_0, d, strategy.value_or(default_grid_strategy(d)), seed);
}

RankSignProfile assign(const Series& residuals, const CenterOutwardGrid& grid) {
  const int n = grid.size();
  const int d = grid.d();
  if (residuals.rows() != n) {
    fail(ErrorKind::SizeMismatch, std::to_string(residuals.rows()) + " residuals for a grid of " +
                                      std::to_string(n) + " points");
  }
  if (residuals.cols() != d) fail(ErrorKind::SizeMismatch, "residual dimension does not match the grid");
  if (!residuals.allFinite()) fail(ErrorKind::NonFinite, "residuals contain NaN or infinite values");

  const auto& kern = kernels::active();
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> cost(un * un);
  for (int t = 0; t < n; ++t) {
    kern.sqdist_row(residuals.row(t).data(), d, grid.coordinate_major().data(), un, un, cost.data() + t * un);
  }
  AssignmentResult solved = solve_assignment(cost, un, kern);

  RankSignProfile profile;
  profile.n = n;
  profile.n_R = grid.n_R();
  profile.n_S = grid.n_S();
  profile.n_0 = grid.n_0();
  profile.cost = solved.cost;
  profile.assignment = std::move(solved.col_for_row);

  // Origin copies are interchangeable: hand them out in observation order.
  const int first_origin = grid.n_R() * grid.n_S();
  std::int64_t next_origin = first_origin;
  for (int t = 0; t < n; ++t) {
    if (profile.assignment[t] >= first_origin) profile.assignment[t] = next_origin++;
  }

  profile.f_pm.resize(n, d);
  profile.signs = Series::Zero(n, d);
  profile.ranks.resize(n);
  for (int t = 0; t < n; ++t) {
    profile.f_pm.row(t) = grid.points().row(profile.assignment[t]);
    const double norm = profile.f_pm.row(t).norm();
    profile.ranks[t] = static_cast<int>(std::lround((grid.n_R() + 1) * norm));
    if (profile.ranks[t] > 0) profile.signs.row(t) = profile.f_pm.row(t) / norm;
  }
  return profile;
}

std::vector<int> quantile_contour_indices(const RankSignProfile& profile, int j) {
  if (j < 0 || j > profile.n_R) {
    fail(ErrorKind::RankOutOfRange, "rank " + std::to_string(j) + " outside 0.." + std::to_string(profile.n_R));
  }
  std::vector<int> out;
  for (int t = 0; t < profile.n; ++t) {
    if (profile.ranks[t] == j) out.push_back(t);
  }
  return out;
}

Series quantile_contour(const RankSignProfile& profile, const Series& residuals, int j) {
  if (residuals.rows() != profile.n) fail(ErrorKind::SizeMismatch, "residuals do not match the profile");
  const std::vector<int> idx = quantile_contour_indices(profile, j);
  Series out(static_cast<Eigen::Index>(idx.size()), residuals.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = residuals.row(idx[r]);
  return out;
}

RadialCdf gaussian_radial_cdf(int d) {
  return [d](double r) { return chi2_cdf(r * r, d); };
}

Vector spherical_f_pm(const Vector& z, const RadialCdf& radial_cdf) {
  const double norm = z.norm();
  if (norm == 0.0) return Vector::Zero(z.size());
  return radial_cdf(norm) * (z / norm);
}

}  // namespace varmarest
