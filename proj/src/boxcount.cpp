#include "sponge/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "sponge/numeric.hpp"

namespace sponge {

namespace {

void cloud_expand(const SpongeSystem& sys, const Rational& delta,
                  const AffineContraction& prefix, const std::array<Rational, 3>& anchor,
                  PointCloud& out, std::size_t max_points) {
  for (const auto& m : sys.maps) {
    const AffineContraction next = compose(prefix, m);
    if (singular_values(next.linear).a1 <= delta) {
      if (out.points.size() >= max_points) throw BudgetError("point cloud exceeds budget");
      auto p = apply(next, anchor);
      out.points.emplace_back(to_double(p[0]), to_double(p[1]), to_double(p[2]));
      out.exact_points.push_back(std::move(p));
    } else {
      cloud_expand(sys, delta, next, anchor, out, max_points);
    }
  }
}

std::uint64_t cell_index(double x, double inv_delta, std::uint64_t cells) {
  auto i = static_cast<std::int64_t>(std::floor(x * inv_delta));
  if (i < 0) i = 0;
  if (i >= static_cast<std::int64_t>(cells)) i = static_cast<std::int64_t>(cells) - 1;
  return static_cast<std::uint64_t>(i);
}

}  // namespace

PointCloud generate_cloud(const SpongeSystem& sys, const Rational& delta_gen,
                          std::optional<std::array<Rational, 3>> anchor,
                          std::size_t max_points) {
  if (delta_gen <= 0 || delta_gen >= 1) throw ValidationError("delta_gen must lie in (0,1)");
  PointCloud cloud;
  cloud.delta_gen = delta_gen;
  cloud.anchor = anchor ? *anchor : fixed_point(sys.maps[0]);
  for (const auto& c : cloud.anchor)
    if (c < 0 || c > 1) throw ValidationError("anchor outside the unit cube");
  cloud_expand(sys, delta_gen, AffineContraction{}, cloud.anchor, cloud, max_points);
  return cloud;
}

GridCount grid_count(const PointCloud& cloud, const Rational& delta) {
  if (delta < cloud.delta_gen)
    throw ValidationError("grid delta finer than the cloud's generation scale");
  if (delta <= 0 || delta > 1) throw ValidationError("delta must lie in (0,1]");
  const BigInt cells_big = rational_floor((Rational(1) / delta) + Rational(999999, 1000000));
  const auto cells = cells_big.convert_to<std::uint64_t>();
  if (cells >= (1ull << 21)) throw ValidationError("grid too fine for cell indexing");
  const auto index = [&](const Rational& x) -> std::uint64_t {
    BigInt i = rational_floor(x / delta);
    if (i < 0) i = 0;
    if (i >= cells_big) i = cells_big - 1;
    return i.convert_to<std::uint64_t>();
  };
  std::vector<std::uint64_t> keys;
  keys.reserve(cloud.exact_points.size());
  for (const auto& p : cloud.exact_points)
    keys.push_back((index(p[0]) << 42) | (index(p[1]) << 21) | index(p[2]));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return {delta, keys.size()};
}

SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& delta_value) {
  const std::size_t n = delta_value.size();
  if (n < 4) throw ValidationError("log-log fit needs at least 4 scales");
  double sx = 0, sy = 0;
  for (const auto& [d, v] : delta_value) {
    sx += -std::log(d);
    sy += std::log(v);
  }
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (const auto& [d, v] : delta_value) {
    const double dx = -std::log(d) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (sxx == 0) throw ValidationError("log-log fit needs distinct scales");
  const double slope = sxy / sxx;
  double ss_res = 0;
  for (const auto& [d, v] : delta_value) {
    const double r = std::log(v) - my - slope * (-std::log(d) - mx);
    ss_res += r * r;
  }
  const double se = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
  return {slope, se};
}

SlopeFit dim_slope(const std::vector<GridCount>& counts) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(counts.size());
  for (const auto& c : counts)
    pts.emplace_back(to_double(c.delta), static_cast<double>(c.count));
  return fit_loglog(pts);
}

namespace {

// Cut-set walk over linear classes; multiplicities make N-fold repeated
// blocks (e.g. identical slabs) cost one branch instead of N.
void cover_bound_expand(const SpongeSystem& sys, const ProjectionDims& dims,
                        const Rational& delta, double eps, const ScaledPermutation& prefix,
                        double weight, PairwiseSum& acc, std::size_t& leaves) {
  for (std::size_t c = 0; c < sys.linear_classes.size(); ++c) {
    const ScaledPermutation next = compose(prefix, sys.linear_classes[c]);
    const double w = weight * sys.class_multiplicity[c];
    const auto sv = singular_values(next);
    if (sv.a3 <= delta) {
      if (++leaves > 20'000'000) throw BudgetError("cover bound enumeration exceeds budget");
      const AxisOrder sigma = principal_ordering(next);
      const double p1 = dims.p1_upper[sigma[0]];
      const double p2 = dims.p2_upper;
      const double a1 = to_double(sv.a1), a2 = to_double(sv.a2), a3 = to_double(sv.a3);
      acc.add(w * std::pow(a1 / a2, p1) * std::pow(a2 / a3, p2) * std::pow(a3, -eps));
    } else {
      cover_bound_expand(sys, dims, delta, eps, next, w, acc, leaves);
    }
  }
}

}  // namespace

double theoretical_cover_bound(const SpongeSystem& sys, const ProjectionDims& dims,
                               const Rational& delta, double eps) {
  if (eps <= 0 || eps >= 1) throw ValidationError("eps must lie in (0,1)");
  if (delta <= 0 || delta >= 1) throw ValidationError("delta must lie in (0,1)");
  PairwiseSum acc;
  std::size_t leaves = 0;
  cover_bound_expand(sys, dims, delta, eps, ScaledPermutation::identity(), 1.0, acc, leaves);
  return acc.total();
}

std::size_t grid_count_2d(const std::vector<Eigen::Vector2d>& points, double delta) {
  if (delta <= 0 || delta > 1) throw ValidationError("delta must lie in (0,1]");
  const double inv = 1.0 / delta;
  const auto cells = static_cast<std::uint64_t>(std::ceil(inv));
  std::vector<std::uint64_t> keys;
  keys.reserve(points.size());
  for (const auto& p : points)
    keys.push_back((cell_index(p.x(), inv, cells) << 32) | cell_index(p.y(), inv, cells));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys.size();
}

namespace {

void cloud_expand_2d(const PlanarCarpetSystem& sys, const Rational& delta,
                     const PlanarMap& prefix, const std::array<Rational, 2>& anchor,
                     std::vector<Eigen::Vector2d>& out, std::size_t max_points) {
  for (const auto& m : sys.maps) {
    const PlanarMap next = planar_compose(prefix, m);
    if (std::min(next.scales[0], next.scales[1]) <= delta) {
      if (out.size() >= max_points) throw BudgetError("planar cloud exceeds budget");
      const auto p = planar_apply(next, anchor);
      out.emplace_back(to_double(p[0]), to_double(p[1]));
    } else {
      cloud_expand_2d(sys, delta, next, anchor, out, max_points);
    }
  }
}

}  // namespace

std::vector<Eigen::Vector2d> generate_cloud_2d(const PlanarCarpetSystem& c,
                                               const Rational& delta_gen,
                                               std::size_t max_points) {
  if (c.maps.empty()) throw ValidationError("empty planar system");
  if (delta_gen <= 0 || delta_gen >= 1) throw ValidationError("delta_gen must lie in (0,1)");
  const auto anchor = planar_fixed_point(c.maps[0]);
  std::vector<Eigen::Vector2d> out;
  cloud_expand_2d(c, delta_gen, PlanarMap{.swap = false, .signs = {1, 1},
                                          .scales = {Rational(1), Rational(1)},
                                          .translation = {Rational(0), Rational(0)}},
                  anchor, out, max_points);
  return out;
}

}  // namespace sponge
