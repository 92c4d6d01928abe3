#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sponge/projections.hpp"
#include "sponge/roots.hpp"

#include <cmath>

#include "systems.hpp"

using namespace sponge;
using testsys::q;

namespace {

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);

AxisEdge self_edge(Rational ratio, Rational offset) {
  return {0, 0, std::move(ratio), 1, std::move(offset)};
}

PlanarMap pmap(Rational sx, Rational sy, Rational tx = Rational(0), Rational ty = Rational(0),
               bool swap = false) {
  PlanarMap m;
  m.swap = swap;
  m.scales = {std::move(sx), std::move(sy)};
  m.translation = {std::move(tx), std::move(ty)};
  return m;
}

// scalar oracle for a one-node graph: t with sum ratio_i^t = 1
double scalar_similarity(const std::vector<double>& ratios) {
  return bisect_decreasing(
      [&](double t) {
        double s = 0;
        for (double r : ratios) s += std::pow(r, t);
        return s;
      },
      0.0, 1.0, 1.0, 1e-12);
}

}  // namespace

TEST_CASE("axis graph structure") {
  const auto diag = axis_graph(testsys::corner_cube_system());
  for (const auto& e : diag.edges) CHECK(e.from == e.to);
  CHECK(strongly_connected_components(diag) ==
        std::vector<std::vector<int>>{{0}, {1}, {2}});

  const auto s3 = axis_graph(testsys::s3_two_map_system());
  CHECK(s3.edges.size() == 6);
  CHECK(strongly_connected_components(s3) == std::vector<std::vector<int>>{{0, 1, 2}});

  AffineContraction swap;
  swap.linear.perm = {1, 0, 2};
  swap.linear.scales = {q(1, 3), q(1, 3), q(1, 4)};
  swap.translation = {q(0), q(0), q(1, 2)};
  const auto two =
      SpongeSystem::build({testsys::diag_map(q(1, 3), q(1, 2), q(1, 4)), swap});
  CHECK(strongly_connected_components(axis_graph(two)) ==
        std::vector<std::vector<int>>{{0, 1}, {2}});
}

TEST_CASE("graph similarity dimension on scalar cases") {
  AxisGraphSystem g;
  g.edges = {self_edge(q(3, 5), q(0)), self_edge(q(1, 5), q(4, 5))};
  const double t = graph_similarity_dimension(g, {0});
  const double oracle = scalar_similarity({0.6, 0.2});
  CHECK(t == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(std::pow(0.6, t) + std::pow(0.2, t) == doctest::Approx(1.0).epsilon(1e-9));

  AxisGraphSystem thirds;
  thirds.edges = {self_edge(q(1, 3), q(0)), self_edge(q(1, 3), q(1, 3)),
                  self_edge(q(1, 3), q(2, 3))};
  CHECK(graph_similarity_dimension(thirds, {0}) == doctest::Approx(1.0).epsilon(1e-9));

  // symmetric 3-cycle, two parallel edges of ratio 1/4 each: t = 1/2
  AxisGraphSystem cyc;
  for (int u = 0; u < 3; ++u) {
    cyc.edges.push_back({u, (u + 1) % 3, q(1, 4), 1, q(0)});
    cyc.edges.push_back({u, (u + 1) % 3, q(1, 4), 1, q(1, 2)});
  }
  CHECK(graph_similarity_dimension(cyc, {0, 1, 2}) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("identical projected 1D maps are counted once") {
  AxisGraphSystem g;
  g.edges = {self_edge(q(1, 2), q(0)), self_edge(q(1, 2), q(0))};
  CHECK(graph_similarity_dimension(g, {0}) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("graph dimension rejects non-strongly-connected components") {
  AxisGraphSystem g;
  g.edges = {{0, 1, q(1, 2), 1, q(0)}};
  CHECK_THROWS_AS((void)graph_similarity_dimension(g, {0, 1}), ValidationError);
}

TEST_CASE("planar projection deduplicates and validates") {
  const auto carpet = planar_projection(testsys::full_tiling_system(), 2);
  CHECK(carpet.maps.size() == 4);
  CHECK(planar_rosc(carpet));

  CHECK_THROWS_AS((void)planar_projection(testsys::s3_two_map_system(), 0), ValidationError);
}

TEST_CASE("planar map algebra") {
  const auto a = pmap(q(1, 2), q(1, 3), q(1, 4), q(1, 5), true);
  const auto b = pmap(q(1, 5), q(1, 7), q(1, 3), q(0), false);
  const std::array<Rational, 2> x{q(1, 2), q(1, 3)};
  CHECK(planar_apply(planar_compose(a, b), x) == planar_apply(a, planar_apply(b, x)));

  const auto fp = planar_fixed_point(a);
  CHECK(planar_apply(a, fp) == fp);
}

TEST_CASE("planar carpet dimension closed forms") {
  Provenance prov;

  // column carpet: dimension exactly 1
  const auto fig = planar_projection(testsys::figure_column_system(), 2);
  CHECK(fig.maps.size() == 2);
  const auto d_fig = planar_carpet_dimension(fig, &prov);
  CHECK(prov == Provenance::Formula);
  CHECK(d_fig[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d_fig[1] == doctest::Approx(1.0).epsilon(1e-9));

  // four half-scale corner maps tile the square: dimension 2
  const auto tiling = planar_projection(testsys::full_tiling_system(), 2);
  CHECK(planar_carpet_dimension(tiling)[0] == doctest::Approx(2.0).epsilon(1e-9));

  // two maps diag(1/2,1/3) at opposite corners: dimension 1
  PlanarCarpetSystem two;
  two.maps = {pmap(q(1, 2), q(1, 3)), pmap(q(1, 2), q(1, 3), q(1, 2), q(2, 3))};
  CHECK(planar_carpet_dimension(two)[0] == doctest::Approx(1.0).epsilon(1e-9));

  // four third-scale corner maps: dimension log4/log3
  const auto corners = planar_projection(testsys::corner_cube_system(), 2);
  CHECK(corners.maps.size() == 4);
  CHECK(planar_carpet_dimension(corners)[0] ==
        doctest::Approx(std::log(4.0) / kLog3).epsilon(1e-9));
}

TEST_CASE("planar pressure root handles swaps") {
  // two similarity maps of ratio 1/3, one of them a swap: dim = log2/log3
  PlanarCarpetSystem c;
  c.maps = {pmap(q(1, 3), q(1, 3)), pmap(q(1, 3), q(1, 3), q(2, 3), q(2, 3), true)};
  CHECK(planar_pressure_root(c) == doctest::Approx(kLog2 / kLog3).epsilon(1e-6));

  Provenance prov;
  const auto interval = planar_carpet_dimension(c, &prov);
  CHECK(prov == Provenance::Formula);
  CHECK(interval[0] == doctest::Approx(kLog2 / kLog3).epsilon(1e-6));
}

TEST_CASE("overlapping carpets fall back to an empirical interval") {
  PlanarCarpetSystem c;
  c.maps = {pmap(q(1, 2), q(1, 2)), pmap(q(1, 2), q(1, 2), q(1, 4), q(1, 4))};
  Provenance prov;
  const auto interval = planar_carpet_dimension(c, &prov);
  CHECK(prov == Provenance::Empirical);
  CHECK(interval[0] >= 0.0);
  CHECK(interval[0] <= interval[1]);
  CHECK(interval[1] <= 2.0);
}

TEST_CASE("projection dims: corner cube") {
  const auto dims = projection_dims(testsys::corner_cube_system());
  for (int a = 0; a < 3; ++a) {
    CHECK(dims.p1_lower[a] == doctest::Approx(kLog2 / kLog3).epsilon(1e-9));
    CHECK(dims.p1_upper[a] == dims.p1_lower[a]);
    CHECK(dims.p1_provenance[a] == Provenance::Formula);
  }
  CHECK(dims.p2_lower == doctest::Approx(std::log(4.0) / kLog3).epsilon(1e-9));
  CHECK(dims.p2_upper == dims.p2_lower);
  CHECK(dims.p2_provenance == Provenance::Formula);
}

TEST_CASE("projection dims: ordered separated system") {
  const auto dims = projection_dims(testsys::ordered_separated_system());
  CHECK(dims.p1_lower[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dims.p1_lower[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(dims.p1_lower[2] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dims.p2_lower == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(dims.p2_upper == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("projection dims: full shadows give p1 = 1 and p2 = 2") {
  const auto dims = projection_dims(testsys::full_tiling_system());
  for (int a = 0; a < 3; ++a) CHECK(dims.p1_lower[a] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dims.p2_lower == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("projection dims: column system") {
  const auto dims = projection_dims(testsys::figure_column_system());
  const double t = scalar_similarity({0.6, 0.2});
  CHECK(dims.p1_lower[0] == doctest::Approx(t).epsilon(1e-9));
  CHECK(dims.p1_lower[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dims.p1_lower[2] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dims.p2_lower == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dims.p2_upper == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dims.p2_provenance == Provenance::Formula);
}

TEST_CASE("projection dims: S3 system uses one component and empirical p2") {
  const auto dims = projection_dims(testsys::s3_two_map_system());
  CHECK(dims.p1_lower[0] == dims.p1_lower[1]);
  CHECK(dims.p1_lower[1] == dims.p1_lower[2]);
  CHECK(dims.p1_lower[0] > 0.0);
  CHECK(dims.p1_upper[0] < 1.0);
  CHECK(dims.p2_provenance == Provenance::Empirical);
  CHECK(dims.p2_lower >= 0.0);
  CHECK(dims.p2_lower <= dims.p2_upper);
  CHECK(dims.p2_upper <= 2.0);
}

TEST_CASE("projection overrides") {
  ProjectionOverrides ov;
  ov.p1 = {0.4, 0.5, 0.6};
  ov.p2_lower = 1.1;
  ov.p2_upper = 1.2;
  const auto dims = projection_dims(testsys::corner_cube_system(), ov);
  CHECK(dims.p1_lower[1] == 0.5);
  CHECK(dims.p1_provenance[0] == Provenance::UserOverride);
  CHECK(dims.p2_lower == 1.1);
  CHECK(dims.p2_upper == 1.2);
  CHECK(dims.p2_provenance == Provenance::UserOverride);

  ProjectionOverrides bad;
  bad.p1 = {1.4, 0.5, 0.6};
  CHECK_THROWS_AS((void)projection_dims(testsys::corner_cube_system(), bad), ValidationError);
  ProjectionOverrides bad2;
  bad2.p2_upper = 2.5;
  CHECK_THROWS_AS((void)projection_dims(testsys::corner_cube_system(), bad2), ValidationError);
}

TEST_CASE("adding maps never decreases formula dimensions") {
  std::vector<AffineContraction> maps{
      testsys::diag_map(q(1, 4), q(1, 4), q(1, 4)),
      testsys::diag_map(q(1, 4), q(1, 4), q(1, 4), q(3, 4), q(3, 4), q(3, 4)),
  };
  auto prev = projection_dims(SpongeSystem::build(maps));
  const std::array<Rational, 2> offs{q(1, 4), q(1, 2)};
  for (const auto& off : offs) {
    maps.push_back(testsys::diag_map(q(1, 4), q(1, 4), q(1, 4), off, off, off));
    const auto next = projection_dims(SpongeSystem::build(maps));
    for (int a = 0; a < 3; ++a) CHECK(next.p1_lower[a] >= prev.p1_lower[a] - 1e-12);
    CHECK(next.p2_lower >= prev.p2_lower - 1e-12);
    prev = next;
  }
}
