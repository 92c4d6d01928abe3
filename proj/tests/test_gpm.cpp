#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sponge/gpm.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "systems.hpp"

using namespace sponge;
using testsys::corner_cube_system;
using testsys::diag_map;
using testsys::figure_column_system;
using testsys::map_a1;
using testsys::map_a2;
using testsys::q;
using testsys::s3_two_map_system;

namespace {

std::mt19937 rng(20260823);

Rational random_scale() {
  std::uniform_int_distribution<int> den_d(2, 9);
  const int den = den_d(rng);
  std::uniform_int_distribution<int> num_d(1, den - 1);
  return Rational(num_d(rng), den);
}

ScaledPermutation random_sp() {
  ScaledPermutation m;
  m.perm = {0, 1, 2};
  std::shuffle(m.perm.begin(), m.perm.end(), rng);
  std::uniform_int_distribution<int> sign_d(0, 1);
  for (int j = 0; j < 3; ++j) {
    m.signs[j] = sign_d(rng) ? 1 : -1;
    m.scales[j] = random_scale();
  }
  return m;
}

bool entries_equal(const ScaledPermutation& m, const std::map<std::pair<int, int>, Rational>& ref) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      auto it = ref.find({r, c});
      const Rational want = it == ref.end() ? Rational(0) : it->second;
      if (m.entry(r, c) != want) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("compose matches the displayed two-letter products") {
  const ScaledPermutation a1 = map_a1().linear;
  const ScaledPermutation a2 = map_a2().linear;

  CHECK(compose(ScaledPermutation::identity(), a1) == a1);
  CHECK(compose(a1, ScaledPermutation::identity()) == a1);

  const ScaledPermutation p12 = compose(a1, a2);
  CHECK(entries_equal(p12, {{{0, 2}, q(-1, 6)}, {{1, 0}, q(-1, 25)}, {{2, 1}, q(1, 28)}}));

  const ScaledPermutation p21 = compose(a2, a1);
  CHECK(entries_equal(p21, {{{0, 1}, q(-1, 12)}, {{1, 2}, q(-1, 35)}, {{2, 0}, q(1, 10)}}));
}

TEST_CASE("compose_word composes left to right") {
  const SpongeSystem sys = s3_two_map_system();

  CHECK(compose_word(sys, {}).linear == ScaledPermutation::identity());
  CHECK(compose_word(sys, {0}) == sys.maps[0]);
  CHECK(compose_word(sys, {0, 1}).linear == compose(map_a1().linear, map_a2().linear));
  CHECK_THROWS_AS((void)compose_word(sys, {0, 5}), std::out_of_range);
}

TEST_CASE("singular values are the sorted composed scales") {
  const auto sv = singular_values(ScaledPermutation::diagonal(q(1, 2), q(1, 3), q(1, 4)));
  CHECK(sv == SingularValues{q(1, 2), q(1, 3), q(1, 4)});

  const SpongeSystem sys = s3_two_map_system();
  CHECK(singular_values(compose_word(sys, {0, 1}).linear) ==
        SingularValues{q(1, 6), q(1, 25), q(1, 28)});
  CHECK(singular_values(compose_word(sys, {1, 0}).linear) ==
        SingularValues{q(1, 10), q(1, 12), q(1, 35)});
}

TEST_CASE("orderings list the axes by nonincreasing image side") {
  CHECK(orderings(ScaledPermutation::diagonal(q(1, 2), q(1, 3), q(1, 4))) ==
        std::vector<AxisOrder>{{0, 1, 2}});

  const auto tied = orderings(ScaledPermutation::diagonal(q(1, 2), q(1, 2), q(1, 4)));
  CHECK(tied == std::vector<AxisOrder>{{0, 1, 2}, {1, 0, 2}});
  CHECK(principal_ordering(ScaledPermutation::diagonal(q(1, 2), q(1, 2), q(1, 4))) ==
        AxisOrder{0, 1, 2});

  // sides of the first two-map-system matrix: x 1/2, y 1/5, z 1/4
  CHECK(orderings(map_a1().linear) == std::vector<AxisOrder>{{0, 2, 1}});
}

TEST_CASE("permutation group closure") {
  CHECK(permutation_group(corner_cube_system()).size() == 1);

  AffineContraction swap;
  swap.linear.perm = {1, 0, 2};
  swap.linear.scales = {q(1, 3), q(1, 3), q(1, 4)};
  swap.translation = {q(0), q(0), q(1, 2)};
  const auto two = SpongeSystem::build({diag_map(q(1, 3), q(1, 3), q(1, 4)), swap});
  CHECK(permutation_group(two).size() == 2);

  CHECK(permutation_group(s3_two_map_system()).size() == 6);
}

TEST_CASE("classification") {
  CHECK(s3_two_map_system().cls == SpongeClass::S3);
  CHECK(corner_cube_system().cls == SpongeClass::OrderedSeparated);
  CHECK(figure_column_system().cls == SpongeClass::GeneralDiagonal);

  // common ordering but overlapping line shadows: Ordered, not separated
  const auto overlapping = SpongeSystem::build({
      diag_map(q(1, 2), q(1, 3), q(1, 4)),
      diag_map(q(1, 2), q(1, 3), q(1, 4), q(1, 4), q(1, 2), q(1, 2)),
  });
  CHECK(overlapping.cls == SpongeClass::Ordered);

  AffineContraction swap;
  swap.linear.perm = {1, 0, 2};
  swap.linear.scales = {q(1, 3), q(1, 3), q(1, 4)};
  swap.translation = {q(0), q(0), q(1, 2)};
  const auto s2 = SpongeSystem::build({diag_map(q(1, 3), q(1, 2), q(1, 4)), swap});
  CHECK(s2.cls == SpongeClass::S2PartiallyOrdered);
}

TEST_CASE("classify is invariant under permutation of the map list") {
  std::vector<SpongeSystem> systems{s3_two_map_system(), corner_cube_system(),
                                    figure_column_system()};
  for (const auto& sys : systems) {
    auto maps = sys.maps;
    for (int trial = 0; trial < 5; ++trial) {
      std::shuffle(maps.begin(), maps.end(), rng);
      CHECK(SpongeSystem::build(maps).cls == sys.cls);
    }
  }
}

TEST_CASE("system validation") {
  CHECK_THROWS_AS((void)SpongeSystem::build({diag_map(q(1, 2), q(1, 2), q(1, 2))}),
                  ValidationError);
  // scale >= 1
  CHECK_THROWS_AS((void)SpongeSystem::build({diag_map(q(1), q(1, 2), q(1, 2)),
                                             diag_map(q(1, 2), q(1, 2), q(1, 2))}),
                  ValidationError);
  // image escapes the unit cube
  CHECK_THROWS_AS(
      (void)SpongeSystem::build({diag_map(q(1, 2), q(1, 2), q(1, 2), q(3, 4), q(0), q(0)),
                                 diag_map(q(1, 2), q(1, 2), q(1, 2))}),
      ValidationError);
}

TEST_CASE("fixed points are exact") {
  const auto f = map_a2();
  const auto x = fixed_point(f);
  CHECK(apply(f, x) == x);

  const auto g = diag_map(q(1, 2), q(1, 3), q(1, 4), q(1, 2), q(1, 3), q(1, 4));
  CHECK(fixed_point(g) == std::array<Rational, 3>{q(1), q(1, 2), q(1, 3)});
}

TEST_CASE("cuboidal open set condition") {
  const Cuboid unit = Cuboid::unit();

  const auto dup = SpongeSystem::build(
      {diag_map(q(1, 2), q(1, 2), q(1, 2)), diag_map(q(1, 2), q(1, 2), q(1, 2))});
  CHECK_FALSE(check_cosc(dup, unit));

  CHECK(check_cosc(figure_column_system(), unit));
  CHECK(check_cosc(corner_cube_system(), unit));

  // closed images share a face; open images are disjoint
  const auto face = SpongeSystem::build({diag_map(q(1, 2), q(1, 2), q(1, 2)),
                                         diag_map(q(1, 2), q(1, 2), q(1, 2), q(1, 2))});
  CHECK(check_cosc(face, unit));

  Cuboid bad = unit;
  bad.lo[0] = q(1);
  CHECK_THROWS_AS((void)check_cosc(dup, bad), ValidationError);
}

TEST_CASE("cut sets match direct enumeration") {
  const auto half = SpongeSystem::build(
      {diag_map(q(1, 2), q(1, 2), q(1, 2)), diag_map(q(1, 2), q(1, 2), q(1, 2), q(1, 2))});
  const auto cs = cut_set(half, q(1, 4));
  CHECK(cs.words.size() == 4);
  for (const auto& w : cs.words) CHECK(w.size() == 2);

  // alpha3(A) = 1/2, alpha3(B) = 1/8, delta = 1/8
  const auto mixed = SpongeSystem::build(
      {diag_map(q(1, 2), q(1, 2), q(1, 2)), diag_map(q(1, 8), q(1, 8), q(1, 8), q(1, 2))});
  const auto cs2 = cut_set(mixed, q(1, 8));
  std::set<Word> got(cs2.words.begin(), cs2.words.end());
  CHECK(got == std::set<Word>{{0, 0, 0}, {0, 0, 1}, {0, 1}, {1}});

  // delta at least every single-map alpha3: all length-1 words
  const auto cs3 = cut_set(mixed, q(1, 2));
  CHECK(cs3.words == std::vector<Word>{{0}, {1}});

  CHECK_THROWS_AS((void)cut_set(mixed, q(1)), ValidationError);
  CHECK_THROWS_AS((void)cut_set(mixed, q(0)), ValidationError);
  CHECK_THROWS_AS((void)cut_set(mixed, q(1, 1000000), 100), BudgetError);
}

TEST_CASE("associativity on randomized triples") {
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_sp(), b = random_sp(), c = random_sp();
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  }
}

TEST_CASE("alpha1 submultiplicative, alpha3 supermultiplicative, product exact") {
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_sp(), b = random_sp();
    const auto sa = singular_values(a), sb = singular_values(b);
    const auto sab = singular_values(compose(a, b));
    CHECK(sab.a1 <= sa.a1 * sb.a1);
    CHECK(sab.a3 >= sa.a3 * sb.a3);
    CHECK(sab.a1 * sab.a2 * sab.a3 == sa.a1 * sa.a2 * sa.a3 * sb.a1 * sb.a2 * sb.a3);
  }
}

TEST_CASE("cut sets are prefix-free, tight and exhaustive on random systems") {
  std::uniform_int_distribution<int> nmaps_d(2, 3);
  std::uniform_int_distribution<int> word_len_d(6, 10);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = nmaps_d(rng);
    std::vector<AffineContraction> maps;
    for (int i = 0; i < n; ++i) {
      const Rational s = random_scale() / 2;
      maps.push_back(diag_map(s, s, s, (1 - s) * Rational(i, n - 1)));
    }
    const auto sys = SpongeSystem::build(std::move(maps));
    const Rational delta = random_scale() * random_scale();
    const auto cs = cut_set(sys, delta);

    std::set<Word> members(cs.words.begin(), cs.words.end());
    REQUIRE(members.size() == cs.words.size());
    for (const auto& w : cs.words) {
      REQUIRE(singular_values(compose_word(sys, w).linear).a3 <= delta);
      Word parent(w.begin(), w.end() - 1);
      const Rational parent_a3 =
          parent.empty() ? Rational(1) : singular_values(compose_word(sys, parent).linear).a3;
      REQUIRE(parent_a3 > delta);
      // prefix-freeness: no proper prefix is a member
      for (std::size_t len = 1; len < w.size(); ++len)
        REQUIRE(members.count(Word(w.begin(), w.begin() + len)) == 0);
    }

    // exhaustiveness: a random long word has exactly one prefix in the set
    std::uniform_int_distribution<int> letter_d(0, n - 1);
    Word probe;
    const int len = word_len_d(rng);
    for (int i = 0; i < len; ++i) probe.push_back(letter_d(rng));
    int hits = 0;
    for (std::size_t l = 1; l <= probe.size(); ++l)
      hits += members.count(Word(probe.begin(), probe.begin() + l));
    REQUIRE(hits == 1);
  }
}
