#include "sponge/gpm.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace sponge {

namespace {

constexpr std::array<int, 3> kAxes{0, 1, 2};

int inverse_axis(const std::array<int, 3>& perm, int target) {
  for (int j : kAxes)
    if (perm[j] == target) return j;
  return -1;
}

struct Interval {
  Rational lo, hi;
  bool operator==(const Interval&) const = default;
};

// Image of [lo, hi] under x -> sign*scale*x + offset.
Interval map_interval(const Interval& in, int sign, const Rational& scale,
                      const Rational& offset) {
  if (sign > 0) return {scale * in.lo + offset, scale * in.hi + offset};
  return {offset - scale * in.hi, offset - scale * in.lo};
}

bool open_disjoint(const Interval& a, const Interval& b) {
  return a.hi <= b.lo || b.hi <= a.lo;
}

std::array<Interval, 3> image_cuboid(const AffineContraction& f, const Cuboid& c) {
  std::array<Interval, 3> out;
  for (int j : kAxes) {
    const int target = f.linear.perm[j];
    out[target] = map_interval({c.lo[j], c.hi[j]}, f.linear.signs[j],
                               f.linear.scales[j], f.translation[target]);
  }
  return out;
}

}  // namespace

ScaledPermutation ScaledPermutation::diagonal(Rational sx, Rational sy, Rational sz) {
  ScaledPermutation m;
  m.scales = {std::move(sx), std::move(sy), std::move(sz)};
  return m;
}

Rational ScaledPermutation::entry(int row, int col) const {
  if (perm[col] != row) return Rational(0);
  return signs[col] > 0 ? scales[col] : -scales[col];
}

Rational ScaledPermutation::side(int axis) const {
  return scales[inverse_axis(perm, axis)];
}

ScaledPermutation compose(const ScaledPermutation& a, const ScaledPermutation& b) {
  ScaledPermutation out;
  for (int j : kAxes) {
    const int mid = b.perm[j];
    out.perm[j] = a.perm[mid];
    out.signs[j] = a.signs[mid] * b.signs[j];
    out.scales[j] = a.scales[mid] * b.scales[j];
  }
  return out;
}

SingularValues singular_values(const ScaledPermutation& m) {
  std::array<Rational, 3> s = m.scales;
  std::sort(s.begin(), s.end(), std::greater<Rational>());
  return {s[0], s[1], s[2]};
}

std::vector<AxisOrder> orderings(const ScaledPermutation& m) {
  std::array<Rational, 3> side{m.side(0), m.side(1), m.side(2)};
  std::vector<AxisOrder> out;
  AxisOrder sigma{0, 1, 2};
  do {
    if (side[sigma[0]] >= side[sigma[1]] && side[sigma[1]] >= side[sigma[2]])
      out.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;  // next_permutation visits in lexicographic order
}

AxisOrder principal_ordering(const ScaledPermutation& m) {
  return orderings(m).front();
}

AffineContraction compose(const AffineContraction& a, const AffineContraction& b) {
  AffineContraction out;
  out.linear = compose(a.linear, b.linear);
  // translation of a∘b: A_a * t_b + t_a
  for (int j : kAxes) {
    const int target = a.linear.perm[j];
    const Rational v = a.linear.scales[j] * b.translation[j];
    out.translation[target] = (a.linear.signs[j] > 0 ? v : -v) + a.translation[target];
  }
  return out;
}

std::array<Rational, 3> apply(const AffineContraction& f, const std::array<Rational, 3>& x) {
  std::array<Rational, 3> out;
  for (int j : kAxes) {
    const int target = f.linear.perm[j];
    const Rational v = f.linear.scales[j] * x[j];
    out[target] = (f.linear.signs[j] > 0 ? v : -v) + f.translation[target];
  }
  return out;
}

std::array<Rational, 3> fixed_point(const AffineContraction& f) {
  // Solve (I - A) x = t exactly by Gaussian elimination on the 3x3 system.
  Rational m[3][4];
  for (int r : kAxes) {
    for (int c : kAxes) m[r][c] = (r == c ? Rational(1) : Rational(0)) - f.linear.entry(r, c);
    m[r][3] = f.translation[r];
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    while (pivot < 3 && m[pivot][col] == 0) ++pivot;
    if (pivot == 3) throw ValidationError("singular linear part in fixed_point");
    if (pivot != col)
      for (int c = col; c < 4; ++c) std::swap(m[pivot][c], m[col][c]);
    for (int r = 0; r < 3; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational factor = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

const char* to_string(SpongeClass c) {
  switch (c) {
    case SpongeClass::OrderedSeparated: return "OrderedSeparated";
    case SpongeClass::Ordered: return "Ordered";
    case SpongeClass::S2PartiallyOrdered: return "S2PartiallyOrdered";
    case SpongeClass::S3: return "S3";
    case SpongeClass::GeneralDiagonal: return "GeneralDiagonal";
    case SpongeClass::General: return "General";
  }
  return "?";
}

AffineContraction compose_word(const SpongeSystem& sys, const Word& w) {
  AffineContraction out;  // identity
  for (int i : w) {
    if (i < 0 || static_cast<std::size_t>(i) >= sys.maps.size())
      throw std::out_of_range("word index out of range");
    out = compose(out, sys.maps[i]);
  }
  return out;
}

std::vector<Perm3> permutation_group(const SpongeSystem& sys) {
  std::set<Perm3> closure;
  closure.insert({0, 1, 2});
  for (const auto& m : sys.maps) closure.insert(m.linear.perm);
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<Perm3> current(closure.begin(), closure.end());
    for (const auto& a : current)
      for (const auto& b : current) {
        Perm3 prod{a[b[0]], a[b[1]], a[b[2]]};
        grew |= closure.insert(prod).second;
      }
  }
  return {closure.begin(), closure.end()};
}

namespace {

bool is_swap01(const Perm3& p) { return p == Perm3{1, 0, 2}; }

std::vector<AxisOrder> common_orderings(const SpongeSystem& sys) {
  std::vector<AxisOrder> common = orderings(sys.maps[0].linear);
  for (std::size_t i = 1; i < sys.maps.size() && !common.empty(); ++i) {
    const auto own = orderings(sys.maps[i].linear);
    std::vector<AxisOrder> kept;
    for (const auto& sigma : common)
      if (std::find(own.begin(), own.end(), sigma) != own.end()) kept.push_back(sigma);
    common = std::move(kept);
  }
  return common;
}

// Example 3.4 condition: projected open images pairwise disjoint or equal,
// both for the planar (sigma1, sigma2) system and the sigma1 line system.
bool ordered_separated(const SpongeSystem& sys, const AxisOrder& sigma) {
  const Cuboid unit = Cuboid::unit();
  struct Proj {
    Interval line;
    std::array<Interval, 2> plane;
  };
  std::vector<Proj> projs;
  for (const auto& f : sys.maps) {
    const auto img = image_cuboid(f, unit);
    projs.push_back({img[sigma[0]], {img[sigma[0]], img[sigma[1]]}});
  }
  for (std::size_t i = 0; i < projs.size(); ++i)
    for (std::size_t j = i + 1; j < projs.size(); ++j) {
      const bool line_ok = open_disjoint(projs[i].line, projs[j].line) ||
                           projs[i].line == projs[j].line;
      const bool plane_ok =
          open_disjoint(projs[i].plane[0], projs[j].plane[0]) ||
          open_disjoint(projs[i].plane[1], projs[j].plane[1]) ||
          projs[i].plane == projs[j].plane;
      if (!line_ok || !plane_ok) return false;
    }
  return true;
}

}  // namespace

SpongeClass classify(const SpongeSystem& sys) {
  const bool all_diagonal = std::all_of(
      sys.maps.begin(), sys.maps.end(),
      [](const AffineContraction& f) { return f.linear.is_diagonal(); });
  if (all_diagonal) {
    const auto common = common_orderings(sys);
    if (common.empty()) return SpongeClass::GeneralDiagonal;
    if (ordered_separated(sys, common.front())) return SpongeClass::OrderedSeparated;
    return SpongeClass::Ordered;
  }

  bool s2_shape = true, has_swap = false, has_diag = false;
  for (const auto& f : sys.maps) {
    const auto& p = f.linear.perm;
    if (f.linear.is_diagonal()) {
      has_diag = true;
    } else if (is_swap01(p)) {
      has_swap = true;
    } else {
      s2_shape = false;
      break;
    }
    if (std::min(f.linear.side(0), f.linear.side(1)) < f.linear.side(2)) {
      s2_shape = false;
      break;
    }
  }
  if (s2_shape && has_swap && has_diag) return SpongeClass::S2PartiallyOrdered;

  if (permutation_group(sys).size() == 6) return SpongeClass::S3;
  return SpongeClass::General;
}

SpongeSystem SpongeSystem::build(std::vector<AffineContraction> maps) {
  if (maps.size() < 2) throw ValidationError("a sponge system needs at least 2 maps");
  SpongeSystem sys;
  sys.maps = std::move(maps);

  const Cuboid unit = Cuboid::unit();
  for (std::size_t i = 0; i < sys.maps.size(); ++i) {
    const auto& f = sys.maps[i];
    for (int j : kAxes) {
      const Rational& s = f.linear.scales[j];
      if (s <= 0 || s >= 1)
        throw ValidationError("map " + std::to_string(i) + ": scale out of (0,1)");
      if (f.linear.signs[j] != 1 && f.linear.signs[j] != -1)
        throw ValidationError("map " + std::to_string(i) + ": sign must be +1 or -1");
    }
    Perm3 sorted = f.linear.perm;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != Perm3{0, 1, 2})
      throw ValidationError("map " + std::to_string(i) + ": perm is not a permutation of {0,1,2}");
    const auto img = image_cuboid(f, unit);
    for (int axis : kAxes)
      if (img[axis].lo < 0 || img[axis].hi > 1)
        throw ValidationError("map " + std::to_string(i) + ": image leaves the unit cube");
  }

  sys.alpha_min = Rational(1);
  sys.alpha_max = Rational(0);
  for (const auto& f : sys.maps) {
    const auto sv = singular_values(f.linear);
    sys.alpha_min = std::min(sys.alpha_min, sv.a3);
    sys.alpha_max = std::max(sys.alpha_max, sv.a1);
  }

  sys.map_class.resize(sys.maps.size());
  for (std::size_t i = 0; i < sys.maps.size(); ++i) {
    const auto& lin = sys.maps[i].linear;
    auto it = std::find(sys.linear_classes.begin(), sys.linear_classes.end(), lin);
    if (it == sys.linear_classes.end()) {
      sys.linear_classes.push_back(lin);
      sys.class_multiplicity.push_back(1.0);
      sys.map_class[i] = static_cast<int>(sys.linear_classes.size()) - 1;
    } else {
      const auto idx = static_cast<std::size_t>(it - sys.linear_classes.begin());
      sys.class_multiplicity[idx] += 1.0;
      sys.map_class[i] = static_cast<int>(idx);
    }
  }

  sys.group = permutation_group(sys);
  sys.cls = classify(sys);
  return sys;
}

Cuboid Cuboid::unit() {
  return {{Rational(0), Rational(0), Rational(0)}, {Rational(1), Rational(1), Rational(1)}};
}

bool check_cosc(const SpongeSystem& sys, const Cuboid& c) {
  for (int axis : kAxes)
    if (c.lo[axis] >= c.hi[axis]) throw ValidationError("empty COSC cuboid");

  std::vector<std::array<Interval, 3>> images;
  images.reserve(sys.maps.size());
  for (const auto& f : sys.maps) {
    const auto img = image_cuboid(f, c);
    for (int axis : kAxes)
      if (img[axis].lo < c.lo[axis] || img[axis].hi > c.hi[axis]) return false;
    images.push_back(img);
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      bool disjoint = false;
      for (int axis : kAxes)
        disjoint = disjoint || open_disjoint(images[i][axis], images[j][axis]);
      if (!disjoint) return false;
    }
  return true;
}

namespace {

void cut_set_expand(const SpongeSystem& sys, const Rational& delta, Word& word,
                    const ScaledPermutation& sp, CutSet& out, std::size_t max_words) {
  for (int i = 0; i < static_cast<int>(sys.maps.size()); ++i) {
    const ScaledPermutation next = compose(sp, sys.maps[i].linear);
    word.push_back(i);
    if (singular_values(next).a3 <= delta) {
      if (out.words.size() >= max_words) throw BudgetError("cut set exceeds word budget");
      out.words.push_back(word);
    } else {
      cut_set_expand(sys, delta, word, next, out, max_words);
    }
    word.pop_back();
  }
}

}  // namespace

CutSet cut_set(const SpongeSystem& sys, const Rational& delta, std::size_t max_words) {
  if (delta <= 0 || delta >= 1) throw ValidationError("cut set delta must lie in (0,1)");
  CutSet out{delta, {}};
  Word word;
  cut_set_expand(sys, delta, word, ScaledPermutation::identity(), out, max_words);
  return out;
}

}  // namespace sponge
