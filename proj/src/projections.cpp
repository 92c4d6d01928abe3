#include "sponge/projections.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

#include "sponge/boxcount.hpp"
#include "sponge/numeric.hpp"
#include "sponge/roots.hpp"

namespace sponge {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Formula: return "formula";
    case Provenance::Empirical: return "empirical";
    case Provenance::UserOverride: return "user-override";
  }
  return "?";
}

AxisGraphSystem axis_graph(const SpongeSystem& sys) {
  AxisGraphSystem g;
  for (const auto& f : sys.maps)
    for (int v = 0; v < 3; ++v)
      g.edges.push_back({v, f.linear.perm[v], f.linear.scales[v], f.linear.signs[v],
                         f.translation[f.linear.perm[v]]});
  return g;
}

namespace {

template <int N>
std::array<std::array<bool, N>, N> reachability(const std::vector<AxisEdge>& edges) {
  std::array<std::array<bool, N>, N> reach{};
  for (int v = 0; v < N; ++v) reach[v][v] = true;
  for (const auto& e : edges) reach[e.from][e.to] = true;
  for (int k = 0; k < N; ++k)
    for (int u = 0; u < N; ++u)
      for (int v = 0; v < N; ++v)
        if (reach[u][k] && reach[k][v]) reach[u][v] = true;
  return reach;
}

// Shared core: spectral-radius bisection for a small graph-directed system.
// Edges are deduplicated first; identical 1D maps project to one copy.
double graph_dimension(std::vector<AxisEdge> edges, const std::vector<int>& component,
                       int n_nodes) {
  std::sort(edges.begin(), edges.end(), [](const AxisEdge& a, const AxisEdge& b) {
    return std::tie(a.from, a.to, a.ratio, a.sign, a.offset) <
           std::tie(b.from, b.to, b.ratio, b.sign, b.offset);
  });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<int> node_pos(static_cast<std::size_t>(n_nodes), -1);
  for (std::size_t i = 0; i < component.size(); ++i) node_pos[component[i]] = static_cast<int>(i);

  std::vector<AxisEdge> internal;
  for (const auto& e : edges)
    if (node_pos[e.from] >= 0 && node_pos[e.to] >= 0) internal.push_back(e);

  {
    // verify strong connectivity using internal edges only
    const int n = static_cast<int>(component.size());
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int v = 0; v < n; ++v) reach[v][v] = true;
    for (const auto& e : internal) reach[node_pos[e.from]][node_pos[e.to]] = true;
    for (int k = 0; k < n; ++k)
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          if (reach[u][k] && reach[k][v]) reach[u][v] = true;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (!reach[u][v]) throw ValidationError("component is not strongly connected");
  }

  const int n = static_cast<int>(component.size());
  const auto rho = [&](double t) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : internal)
      m(node_pos[e.from], node_pos[e.to]) += std::pow(to_double(e.ratio), t);
    return m.eigenvalues().cwiseAbs().maxCoeff();
  };

  if (rho(0.0) < 1.0)
    throw ValidationError("spectral radius below 1 at t = 0: malformed component");
  if (rho(1.0) >= 1.0) return 1.0;  // shadow fills the line
  return bisect_decreasing(rho, 0.0, 1.0, 1.0, 1e-12);
}

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const AxisGraphSystem& g) {
  const auto reach = reachability<3>(g.edges);
  std::vector<std::vector<int>> comps;
  std::array<bool, 3> placed{};
  for (int u = 0; u < 3; ++u) {
    if (placed[u]) continue;
    std::vector<int> comp;
    for (int v = u; v < 3; ++v)
      if (reach[u][v] && reach[v][u]) {
        comp.push_back(v);
        placed[v] = true;
      }
    comps.push_back(std::move(comp));
  }
  return comps;
}

double graph_similarity_dimension(const AxisGraphSystem& g, const std::vector<int>& component) {
  return graph_dimension(g.edges, component, 3);
}

Rational planar_side(const PlanarMap& f, int axis) {
  return f.scales[f.swap ? 1 - axis : axis];
}

std::array<Rational, 2> planar_apply(const PlanarMap& f, const std::array<Rational, 2>& x) {
  std::array<Rational, 2> out;
  for (int j = 0; j < 2; ++j) {
    const int target = f.swap ? 1 - j : j;
    const Rational v = f.scales[j] * x[j];
    out[target] = (f.signs[j] > 0 ? v : -v) + f.translation[target];
  }
  return out;
}

PlanarMap planar_compose(const PlanarMap& a, const PlanarMap& b) {
  PlanarMap c;
  c.swap = a.swap != b.swap;
  for (int j = 0; j < 2; ++j) {
    const int mid = b.swap ? 1 - j : j;
    c.scales[j] = b.scales[j] * a.scales[mid];
    c.signs[j] = b.signs[j] * a.signs[mid];
  }
  for (int r = 0; r < 2; ++r) {
    const int src = a.swap ? 1 - r : r;
    const Rational v = a.scales[src] * b.translation[src];
    c.translation[r] = (a.signs[src] > 0 ? v : -v) + a.translation[r];
  }
  return c;
}

std::array<Rational, 2> planar_fixed_point(const PlanarMap& f) {
  // 2x2 exact solve of (I - A) x = t.
  Rational a00(1), a01(0), a10(0), a11(1);
  const Rational s0 = f.signs[0] > 0 ? f.scales[0] : -f.scales[0];
  const Rational s1 = f.signs[1] > 0 ? f.scales[1] : -f.scales[1];
  if (f.swap) {
    a01 -= s1;
    a10 -= s0;
  } else {
    a00 -= s0;
    a11 -= s1;
  }
  const Rational det = a00 * a11 - a01 * a10;
  if (det == 0) throw ValidationError("singular planar linear part");
  const Rational& t0 = f.translation[0];
  const Rational& t1 = f.translation[1];
  return {(a11 * t0 - a01 * t1) / det, (a00 * t1 - a10 * t0) / det};
}

PlanarCarpetSystem planar_projection(const SpongeSystem& sys, int dropped_axis) {
  if (dropped_axis < 0 || dropped_axis > 2) throw ValidationError("axis out of range");
  std::array<int, 2> kept{};
  int k = 0;
  for (int a = 0; a < 3; ++a)
    if (a != dropped_axis) kept[k++] = a;

  PlanarCarpetSystem out;
  for (const auto& f : sys.maps) {
    if (f.linear.perm[dropped_axis] != dropped_axis)
      throw ValidationError("a map moves the dropped axis; no planar projection");
    PlanarMap p;
    p.swap = f.linear.perm[kept[0]] != kept[0];
    for (int j = 0; j < 2; ++j) {
      p.scales[j] = f.linear.scales[kept[j]];
      p.signs[j] = f.linear.signs[kept[j]];
      p.translation[j] = f.translation[kept[j]];
    }
    // duplicate 3D maps project to the same planar map; keep one copy
    if (std::find(out.maps.begin(), out.maps.end(), p) == out.maps.end())
      out.maps.push_back(std::move(p));
  }
  return out;
}

namespace {

struct Interval {
  Rational lo, hi;
};

Interval planar_image(const PlanarMap& f, int axis) {
  const int src = f.swap ? 1 - axis : axis;
  const Rational& s = f.scales[src];
  const Rational& t = f.translation[axis];
  if (f.signs[src] > 0) return {t, t + s};
  return {t - s, t};
}

bool open_disjoint(const Interval& a, const Interval& b) {
  return a.hi <= b.lo || b.hi <= a.lo;
}

std::vector<AxisEdge> planar_axis_edges(const PlanarCarpetSystem& c) {
  std::vector<AxisEdge> edges;
  for (const auto& f : c.maps)
    for (int v = 0; v < 2; ++v) {
      const int to = f.swap ? 1 - v : v;
      edges.push_back({v, to, f.scales[v], f.signs[v], f.translation[to]});
    }
  return edges;
}

}  // namespace

bool planar_rosc(const PlanarCarpetSystem& c) {
  std::vector<std::array<Interval, 2>> images;
  for (const auto& f : c.maps) {
    std::array<Interval, 2> img{planar_image(f, 0), planar_image(f, 1)};
    for (int axis = 0; axis < 2; ++axis)
      if (img[axis].lo < 0 || img[axis].hi > 1) return false;
    images.push_back(img);
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (!open_disjoint(images[i][0], images[j][0]) &&
          !open_disjoint(images[i][1], images[j][1]))
        return false;
  return true;
}

double planar_axis_dimension(const PlanarCarpetSystem& c, int axis) {
  const auto edges = planar_axis_edges(c);
  // component containing the axis, on the 2-node shadow graph
  const auto reach = reachability<2>(edges);
  std::vector<int> comp;
  for (int v = 0; v < 2; ++v)
    if (reach[axis][v] && reach[v][axis]) comp.push_back(v);
  return graph_dimension(edges, comp, 2);
}

double planar_pressure_root(const PlanarCarpetSystem& c, int k_max) {
  const std::array<double, 2> pax{planar_axis_dimension(c, 0), planar_axis_dimension(c, 1)};

  // group by the scale data the pressure sum sees
  struct Class {
    bool swap;
    std::array<Rational, 2> scales;
    double mult;
  };
  std::vector<Class> classes;
  for (const auto& f : c.maps) {
    auto it = std::find_if(classes.begin(), classes.end(), [&](const Class& cl) {
      return cl.swap == f.swap && cl.scales == f.scales;
    });
    if (it == classes.end())
      classes.push_back({f.swap, f.scales, 1.0});
    else
      it->mult += 1.0;
  }

  int k = 1;
  double words = static_cast<double>(classes.size());
  while (k < k_max && words * static_cast<double>(classes.size()) <= 2e6) {
    words *= static_cast<double>(classes.size());
    ++k;
  }

  // leaf terms: psi(word, s) = dom^p * other^(s-p) = coeff * other^s
  struct Leaf {
    double coeff, other;
  };
  std::vector<Leaf> leaves;
  struct Node {
    bool swap;
    std::array<Rational, 2> scales;
    double weight;
  };
  std::vector<Node> stack{{false, {Rational(1), Rational(1)}, 1.0}};
  std::vector<int> depth_stack{0};
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    const int depth = depth_stack.back();
    depth_stack.pop_back();
    if (depth == k) {
      const Rational side0 = node.swap ? node.scales[1] : node.scales[0];
      const Rational side1 = node.swap ? node.scales[0] : node.scales[1];
      const int dom = side0 >= side1 ? 0 : 1;
      const double a_dom = to_double(dom == 0 ? side0 : side1);
      const double a_other = to_double(dom == 0 ? side1 : side0);
      const double p = pax[dom];
      leaves.push_back({node.weight * std::pow(a_dom, p) * std::pow(a_other, -p), a_other});
      continue;
    }
    for (const auto& cl : classes) {
      Node next;
      next.swap = node.swap != cl.swap;
      for (int j = 0; j < 2; ++j) next.scales[j] = cl.scales[j] * node.scales[cl.swap ? 1 - j : j];
      next.weight = node.weight * cl.mult;
      stack.push_back(std::move(next));
      depth_stack.push_back(depth + 1);
    }
  }

  const auto pressure_k = [&](double s) {
    PairwiseSum acc;
    for (const auto& leaf : leaves) acc.add(leaf.coeff * std::pow(leaf.other, s));
    return std::pow(acc.total(), 1.0 / static_cast<double>(k));
  };

  double hi = 4.0;
  while (pressure_k(hi) > 1.0 && hi < 64.0) hi *= 2.0;
  return bisect_decreasing(pressure_k, 0.0, hi, 1.0, 1e-9);
}

namespace {

std::array<double, 2> empirical_interval(SlopeFit fit) {
  return {std::max(0.0, fit.slope - 2.0 * fit.stderr_),
          std::min(2.0, fit.slope + 2.0 * fit.stderr_)};
}

std::array<double, 2> empirical_from_points(const std::vector<Eigen::Vector2d>& pts,
                                            const Rational& delta_gen) {
  const double dg = to_double(delta_gen);
  int jmax = 2;
  while (std::pow(2.0, -(jmax + 1)) >= 4.0 * dg && jmax < 9) ++jmax;
  std::vector<std::pair<double, double>> data;
  for (int j = 2; j <= jmax; ++j) {
    const double d = std::pow(2.0, -j);
    data.emplace_back(d, static_cast<double>(grid_count_2d(pts, d)));
  }
  return empirical_interval(fit_loglog(data));
}

}  // namespace

std::array<double, 2> planar_carpet_dimension(const PlanarCarpetSystem& c,
                                              Provenance* provenance) {
  const bool has_swap =
      std::any_of(c.maps.begin(), c.maps.end(), [](const PlanarMap& m) { return m.swap; });

  if (planar_rosc(c)) {
    double val;
    if (!has_swap) {
      // diagonal carpet: the dimension is the larger of the two
      // direction-dominant pressure roots
      const auto direction_root = [&](int dom) {
        const double p = planar_axis_dimension(c, dom);
        const auto f = [&](double s) {
          PairwiseSum acc;
          for (const auto& m : c.maps) {
            const double fd = to_double(m.scales[dom]);
            const double g = to_double(m.scales[1 - dom]);
            acc.add(std::pow(fd, p) * std::pow(g, s - p));
          }
          return acc.total();
        };
        // f(p) >= 1 in exact arithmetic but can round a hair below it
        const double lo = std::max(0.0, p - 1e-6);
        double hi = p + 2.0 + 1e-9;
        while (f(hi) > 1.0 && hi < p + 64.0) hi += 2.0;
        return bisect_decreasing(f, lo, hi, 1.0, 1e-12);
      };
      val = std::max(direction_root(0), direction_root(1));
    } else {
      val = planar_pressure_root(c);
    }
    val = std::clamp(val, 0.0, 2.0);
    if (provenance) *provenance = Provenance::Formula;
    return {val, val};
  }

  // no separation: honest empirical interval from planar box counting
  if (provenance) *provenance = Provenance::Empirical;
  for (int j = 12; j >= 5; j -= 2) {
    const Rational dg = rational_pow(Rational(1, 2), static_cast<unsigned>(j));
    try {
      return empirical_from_points(generate_cloud_2d(c, dg, 2'000'000), dg);
    } catch (const BudgetError&) {
      continue;
    }
  }
  throw BudgetError("planar cloud budget exhausted at every scale");
}

ProjectionDims projection_dims(const SpongeSystem& sys,
                               const std::optional<ProjectionOverrides>& overrides) {
  ProjectionDims dims;
  const AxisGraphSystem g = axis_graph(sys);
  const auto comps = strongly_connected_components(g);
  for (const auto& comp : comps) {
    const double p = graph_similarity_dimension(g, comp);
    for (int axis : comp) {
      dims.p1_lower[axis] = dims.p1_upper[axis] = p;
      dims.p1_provenance[axis] = Provenance::Formula;
    }
  }

  // dropped axis for the 2D projection: prefer the shortest axis of the
  // first map's ordering among axes fixed by every permutation
  const AxisOrder sigma = principal_ordering(sys.maps[0].linear);
  std::vector<int> fixed_axes;
  for (int a = 0; a < 3; ++a) {
    const bool fixed = std::all_of(sys.maps.begin(), sys.maps.end(),
                                   [&](const AffineContraction& f) { return f.linear.perm[a] == a; });
    if (fixed) fixed_axes.push_back(a);
  }

  if (!fixed_axes.empty()) {
    int drop = fixed_axes.front();
    for (int pos = 2; pos >= 0; --pos) {
      if (std::find(fixed_axes.begin(), fixed_axes.end(), sigma[pos]) != fixed_axes.end()) {
        drop = sigma[pos];
        break;
      }
    }
    const auto interval = planar_carpet_dimension(planar_projection(sys, drop),
                                                  &dims.p2_provenance);
    dims.p2_lower = interval[0];
    dims.p2_upper = interval[1];
  } else {
    // every axis moves (e.g. full S3 action): box-count the projected cloud
    dims.p2_provenance = Provenance::Empirical;
    bool done = false;
    for (int j = 12; j >= 5 && !done; j -= 2) {
      const Rational dg = rational_pow(Rational(1, 2), static_cast<unsigned>(j));
      try {
        const PointCloud cloud = generate_cloud(sys, dg, {}, 2'000'000);
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(cloud.points.size());
        for (const auto& p : cloud.points) pts.emplace_back(p[sigma[0]], p[sigma[1]]);
        const auto interval = empirical_from_points(pts, dg);
        dims.p2_lower = interval[0];
        dims.p2_upper = interval[1];
        done = true;
      } catch (const BudgetError&) {
        continue;
      }
    }
    if (!done) throw BudgetError("cloud budget exhausted at every scale");
  }

  if (overrides) {
    if (overrides->p1) {
      for (int a = 0; a < 3; ++a) {
        const double v = (*overrides->p1)[a];
        if (v < 0.0 || v > 1.0) throw ValidationError("p1 override outside [0,1]");
        dims.p1_lower[a] = dims.p1_upper[a] = v;
        dims.p1_provenance[a] = Provenance::UserOverride;
      }
    }
    if (overrides->p2_lower) {
      if (*overrides->p2_lower < 0.0 || *overrides->p2_lower > 2.0)
        throw ValidationError("p2 override outside [0,2]");
      dims.p2_lower = *overrides->p2_lower;
      dims.p2_provenance = Provenance::UserOverride;
    }
    if (overrides->p2_upper) {
      if (*overrides->p2_upper < 0.0 || *overrides->p2_upper > 2.0)
        throw ValidationError("p2 override outside [0,2]");
      dims.p2_upper = *overrides->p2_upper;
      dims.p2_provenance = Provenance::UserOverride;
    }
    if (dims.p2_lower > dims.p2_upper) throw ValidationError("p2_lower exceeds p2_upper");
  }
  return dims;
}

}  // namespace sponge
