#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "sponge/rational.hpp"

namespace sponge {

// Signed, scaled 3x3 permutation matrix. Column j has its single nonzero
// entry at row perm[j] with value signs[j] * scales[j]; scales are indexed
// by source axis and kept as exact positive rationals.
struct ScaledPermutation {
  std::array<int, 3> perm{0, 1, 2};
  std::array<int, 3> signs{1, 1, 1};
  std::array<Rational, 3> scales{Rational(1), Rational(1), Rational(1)};

  static ScaledPermutation identity() { return {}; }
  static ScaledPermutation diagonal(Rational sx, Rational sy, Rational sz);

  bool is_diagonal() const { return perm == std::array<int, 3>{0, 1, 2}; }
  Rational entry(int row, int col) const;
  // Side length of the image cuboid along a given axis.
  Rational side(int axis) const;

  bool operator==(const ScaledPermutation&) const = default;
};

ScaledPermutation compose(const ScaledPermutation& a, const ScaledPermutation& b);

struct SingularValues {
  Rational a1, a2, a3;  // a1 >= a2 >= a3 > 0
  bool operator==(const SingularValues&) const = default;
};
SingularValues singular_values(const ScaledPermutation& m);

// An ordering lists the target axes by nonincreasing side length of the
// image cuboid; ties yield several orderings.
using AxisOrder = std::array<int, 3>;
std::vector<AxisOrder> orderings(const ScaledPermutation& m);  // lex-sorted
AxisOrder principal_ordering(const ScaledPermutation& m);      // lex-smallest

struct AffineContraction {
  ScaledPermutation linear;
  std::array<Rational, 3> translation{Rational(0), Rational(0), Rational(0)};
  bool operator==(const AffineContraction&) const = default;
};

AffineContraction compose(const AffineContraction& a, const AffineContraction& b);
std::array<Rational, 3> apply(const AffineContraction& f, const std::array<Rational, 3>& x);
// Unique fixed point of a contraction, solved exactly.
std::array<Rational, 3> fixed_point(const AffineContraction& f);

enum class SpongeClass {
  OrderedSeparated,
  Ordered,
  S2PartiallyOrdered,
  S3,
  GeneralDiagonal,
  General,
};
const char* to_string(SpongeClass c);

using Perm3 = std::array<int, 3>;

struct SpongeSystem {
  std::vector<AffineContraction> maps;
  std::vector<Perm3> group;  // closure of the maps' permutations, sorted
  SpongeClass cls = SpongeClass::General;
  Rational alpha_min, alpha_max;

  // Maps grouped by identical linear part; word sums that depend only on
  // the linear cocycle run over these classes with multiplicities.
  std::vector<ScaledPermutation> linear_classes;
  std::vector<double> class_multiplicity;
  std::vector<int> map_class;

  std::size_t size() const { return maps.size(); }

  // Validates invariants (>= 2 maps, contracting scales, images inside the
  // unit cube) and precomputes group, class label and the class table.
  static SpongeSystem build(std::vector<AffineContraction> maps);
};

using Word = std::vector<int>;

AffineContraction compose_word(const SpongeSystem& sys, const Word& w);
std::vector<Perm3> permutation_group(const SpongeSystem& sys);
SpongeClass classify(const SpongeSystem& sys);

struct Cuboid {
  std::array<Rational, 3> lo, hi;
  static Cuboid unit();
};

// True iff the open images of c under the maps are pairwise disjoint
// subsets of c; exact per-axis interval arithmetic.
bool check_cosc(const SpongeSystem& sys, const Cuboid& c);

struct CutSet {
  Rational delta;
  std::vector<Word> words;
};

// delta-stopping: words entering the set the first time alpha_3 drops to
// <= delta; alpha_3 of the empty word counts as 1.
CutSet cut_set(const SpongeSystem& sys, const Rational& delta,
               std::size_t max_words = 20'000'000);

}  // namespace sponge
