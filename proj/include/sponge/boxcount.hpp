#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "sponge/gpm.hpp"
#include "sponge/projections.hpp"

namespace sponge {

struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  // same points kept exactly; grid cells are assigned by rational floor so
  // boundary points never land in the wrong cell
  std::vector<std::array<Rational, 3>> exact_points;
  Rational delta_gen;
  std::array<Rational, 3> anchor;
};

// One point per cylinder refined until its largest side is <= delta_gen
// (so every cylinder fits in a generation-scale box): the image of the
// anchor. Default anchor is the fixed point of the first map.
PointCloud generate_cloud(const SpongeSystem& sys, const Rational& delta_gen,
                          std::optional<std::array<Rational, 3>> anchor = {},
                          std::size_t max_points = 20'000'000);

struct GridCount {
  Rational delta;
  std::size_t count;
};

// Occupied cells of the origin-anchored delta-grid. Requires
// delta >= delta_gen of the cloud.
GridCount grid_count(const PointCloud& cloud, const Rational& delta);

struct SlopeFit {
  double slope;
  double stderr_;
};

// Least-squares fit of log count against -log delta; needs >= 4 scales.
SlopeFit dim_slope(const std::vector<GridCount>& counts);

// Generic log-log fit over (delta, value) pairs.
SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& delta_value);

// Sum over the delta cut set of the per-cylinder cover estimate
// (a1/a2)^p1 (a2/a3)^p2 a3^(-eps), with upper-variant dims.
double theoretical_cover_bound(const SpongeSystem& sys, const ProjectionDims& dims,
                               const Rational& delta, double eps);

// Occupied cells of the origin-anchored planar delta-grid.
std::size_t grid_count_2d(const std::vector<Eigen::Vector2d>& points, double delta);

// Planar attractor discretization, one point per planar cut-set word.
std::vector<Eigen::Vector2d> generate_cloud_2d(const PlanarCarpetSystem& c,
                                               const Rational& delta_gen,
                                               std::size_t max_points = 20'000'000);

}  // namespace sponge
