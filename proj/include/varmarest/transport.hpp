#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "varmarest/model.hpp"

namespace varmarest {

struct GridFactorization {
  int n_R = 0;
  int n_S = 0;
  int n_0 = 0;
};

/// n = n_R * n_S + n_0 with 0 <= n_0 < min(n_R, n_S).
///
/// d = 2: n_R <= sqrt(n) minimising n_0, then the largest such n_R
///        (1000 -> 25 x 40, 300 -> 15 x 20).
/// d = 3: n_S taken from the octahedral sphere-mesh sizes 4k^2 + 2, the
///        largest one leaving n_R >= round(n^(1/3)) (1000 -> 15 x 66 + 10).
/// otherwise, or when the d = 3 rule has no feasible size: n_R near
///        round(n^(1/d)) minimising n_0.
/// Explicit n_R and/or n_S override the search. Throws Infeasible.
GridFactorization factorize_n(int n, int d, std::optional<int> n_R = std::nullopt,
                              std::optional<int> n_S = std::nullopt);

enum class GridStrategy { Regular2d, Fibonacci3d, RandomSphere };

std::string_view to_string(GridStrategy strategy);
GridStrategy parse_grid_strategy(std::string_view name);
GridStrategy default_grid_strategy(int d);

/// Gridpoints of the unit ball: radius index j = 1..n_R (outer loop) times
/// direction k = 0..n_S-1, followed by n_0 copies of the origin.
class CenterOutwardGrid {
 public:
  CenterOutwardGrid(int d, int n_R, int n_S, int n_0, Series directions);

  int d() const noexcept { return d_; }
  int n_R() const noexcept { return n_R_; }
  int n_S() const noexcept { return n_S_; }
  int n_0() const noexcept { return n_0_; }
  int size() const noexcept { return n_R_ * n_S_ + n_0_; }

  const Series& points() const noexcept { return points_; }
  const Series& directions() const noexcept { return directions_; }
  const std::vector<double>& radii() const noexcept { return radii_; }

  /// Coordinate-major copy of points(): coordinate k of point g at k*size()+g.
  const std::vector<double>& coordinate_major() const noexcept { return soa_; }

  /// Radius index of gridpoint g (0 for the origin copies).
  int rank_of(int g) const noexcept { return g < n_R_ * n_S_ ? g / n_S_ + 1 : 0; }

 private:
  int d_, n_R_, n_S_, n_0_;
  Series directions_;
  Series points_;
  std::vector<double> radii_;
  std::vector<double> soa_;
};

/// regular2d: angles 2 pi k / n_S starting at (1, 0) (d = 2 only).
/// fibonacci3d: spherical Fibonacci lattice (d = 3 only).
/// random_sphere: normalised Gaussian draws from `seed` (any d >= 2).
/// Throws StrategyDimensionMismatch.
CenterOutwardGrid make_grid(int n_R, int n_S, int n_0, int d, GridStrategy strategy,
                            std::uint64_t seed = 0);

/// Grid for a sample of size n with the default factorization and strategy.
CenterOutwardGrid make_grid_for(int n, int d, std::optional<GridStrategy> strategy = std::nullopt,
                                std::uint64_t seed = 0);

struct RankSignProfile {
  int n = 0;
  int n_R = 0;
  int n_S = 0;
  int n_0 = 0;
  /// observation t -> gridpoint index
  std::vector<std::int64_t> assignment;
  Series f_pm;             // empirical center-outward distribution function values
  std::vector<int> ranks;  // 0..n_R
  Series signs;            // unit vectors, zero rows at the origin
  double cost = 0.0;       // sum_t ||Z_t - F(Z_t)||^2
};

/// Optimal coupling of the residuals to the grid (squared Euclidean cost,
/// exact solver) followed by ranks R = round((n_R + 1) ||F||) and signs
/// F / ||F||. Observations coupled to origin copies are matched to those
/// copies in increasing index order. Throws SizeMismatch, NonFinite.
RankSignProfile assign(const Series& residuals, const CenterOutwardGrid& grid);

/// Rows of `residuals` whose rank is j; probability content j / (n_R + 1).
/// Throws RankOutOfRange.
Series quantile_contour(const RankSignProfile& profile, const Series& residuals, int j);
std::vector<int> quantile_contour_indices(const RankSignProfile& profile, int j);

using RadialCdf = std::function<double(double)>;

/// Distribution function of ||Z|| for Z ~ N(0, I_d): r -> F_{chi2_d}(r^2).
RadialCdf gaussian_radial_cdf(int d);

/// Population center-outward map of a spherical law with radial CDF F*:
/// F*(||z||) z / ||z||, and 0 at z = 0.
Vector spherical_f_pm(const Vector& z, const RadialCdf& radial_cdf);

}  // namespace varmarest
