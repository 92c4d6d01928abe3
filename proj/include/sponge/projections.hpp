#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sponge/gpm.hpp"

namespace sponge {

// One edge per (map, source axis): the 1D similarity seen along that axis.
struct AxisEdge {
  int from, to;     // source axis -> image axis
  Rational ratio;   // contraction along the source axis
  int sign;
  Rational offset;  // translation component on the image axis
  bool operator==(const AxisEdge&) const = default;
};

struct AxisGraphSystem {
  std::vector<AxisEdge> edges;
};

AxisGraphSystem axis_graph(const SpongeSystem& sys);

// Strongly connected components of the 3-node axis graph, each sorted,
// listed by smallest member.
std::vector<std::vector<int>> strongly_connected_components(const AxisGraphSystem& g);

// Unique t in [0,1] with Perron root of M(t) = 1, where
// M(t)[u][v] = sum of ratio^t over deduplicated edges u -> v restricted to
// the component; clamped at 1. Edges describing the same 1D map coincide
// in the projection and are counted once.
double graph_similarity_dimension(const AxisGraphSystem& g, const std::vector<int>& component);

// Planar affine map with diagonal or antidiagonal linear part. scales and
// signs are indexed by source axis; swap means source axis j lands on 1-j.
struct PlanarMap {
  bool swap = false;
  std::array<int, 2> signs{1, 1};
  std::array<Rational, 2> scales{Rational(1, 2), Rational(1, 2)};
  std::array<Rational, 2> translation{Rational(0), Rational(0)};
  bool operator==(const PlanarMap&) const = default;
};

struct PlanarCarpetSystem {
  std::vector<PlanarMap> maps;
};

PlanarMap planar_compose(const PlanarMap& a, const PlanarMap& b);
std::array<Rational, 2> planar_apply(const PlanarMap& f, const std::array<Rational, 2>& x);
std::array<Rational, 2> planar_fixed_point(const PlanarMap& f);
// Side length of the image square along a given axis.
Rational planar_side(const PlanarMap& f, int axis);

// Deletes one coordinate; every map's permutation must fix the dropped axis.
PlanarCarpetSystem planar_projection(const SpongeSystem& sys, int dropped_axis);

// Rectangular open set condition on the open unit square.
bool planar_rosc(const PlanarCarpetSystem& c);

// Similarity dimension of the 1D shadow system on one axis of the carpet
// (2-node graph analogue of graph_similarity_dimension), clamped at 1.
double planar_axis_dimension(const PlanarCarpetSystem& c, int axis);

enum class Provenance { Formula, Empirical, UserOverride };
const char* to_string(Provenance p);

// Box dimension of the carpet as an interval. Degenerate at the pressure
// root when the ROSC holds; an empirical box-count interval otherwise.
std::array<double, 2> planar_carpet_dimension(const PlanarCarpetSystem& c,
                                              Provenance* provenance = nullptr);

// Root of the planar modified singular value pressure at fixed word length,
// with the dominant-axis exponent taken from the shadow dimensions.
double planar_pressure_root(const PlanarCarpetSystem& c, int k_max = 12);

struct ProjectionOverrides {
  std::optional<std::array<double, 3>> p1;
  std::optional<double> p2_lower, p2_upper;
};

struct ProjectionDims {
  std::array<double, 3> p1_lower{}, p1_upper{};
  double p2_lower = 0.0, p2_upper = 2.0;
  std::array<Provenance, 3> p1_provenance{Provenance::Formula, Provenance::Formula,
                                          Provenance::Formula};
  Provenance p2_provenance = Provenance::Formula;
};

ProjectionDims projection_dims(const SpongeSystem& sys,
                               const std::optional<ProjectionOverrides>& overrides = {});

}  // namespace sponge
