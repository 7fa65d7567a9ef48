#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sheaflab/error.hpp"
#include "sheaflab/twisted.hpp"

using namespace sheaflab;

namespace {

// The degree-2 cover of B_2 whose e1-lifts are self-loops.
GaloisCover unhappy_cover() {
  return cover_from_coordinates({bouquet(2), FiniteGroup::cyclic(2), {0, 1}});
}

}  // namespace

TEST_CASE("twisted differential special cases") {
  PrimeField f(101);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Sheaf s = random_sheaf(random_digraph(1 + trial % 4, trial % 6, trial), f, 2, rng);
    const std::size_t m = s.base().num_edges();
    CHECK(twisted_differential(s, {std::vector<Residue>(m, 1)}) == differential(s));
    CHECK(twisted_differential(s, {std::vector<Residue>(m, 0)}) == head_differential(s));
  }
  CHECK_THROWS_AS(twisted_differential(unhappy_bundle(f), {{1}}), InputError);
}

TEST_CASE("unhappy bundle twisted incidence matrix") {
  PrimeField f;
  const Residue p1 = 1000003, p2 = 7777;
  Matrix d = twisted_differential(unhappy_bundle(f), {{p1, p2}});
  const Residue m1 = f.neg(p1), m2 = f.neg(p2);
  CHECK(d == Matrix(4, 4, {1, 0, 1, 0,  //
                           0, 1, m2, 0,  //
                           m1, 0, 0, 1,  //
                           0, m1, 0, m2}));
}

TEST_CASE("unhappy bundle twisted Betti numbers") {
  PrimeField f;
  Sheaf u = unhappy_bundle(f);
  auto tb = twisted_betti(u, 3, 7);
  CHECK(tb.h1t == 1);
  CHECK(tb.h0t == 1);
  CHECK(tb.degree == 4);
  CHECK(tb.failure_bound() == doctest::Approx(4.0 / 2147483647.0));

  auto up = twisted_betti(pullback(unhappy_cover().projection, u), 3, 7);
  CHECK(up.h1t == 0);
  CHECK(up.h0t == 0);  // chi of the pullback is 8 - 8

  CHECK_THROWS_AS(twisted_betti(unhappy_bundle(PrimeField(7))), InputError);
  CHECK_THROWS_AS(twisted_betti(u, 0), InputError);
}

TEST_CASE("twisted h1 of the structure sheaf is rho") {
  PrimeField f;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Digraph g = random_digraph(1 + seed % 8, seed % 13, seed);
    auto tb = twisted_betti(structure_sheaf(g, f), 3, seed);
    auto inv = invariants(g);
    CHECK(tb.h1t == inv.rho);
    CHECK(static_cast<std::int64_t>(tb.h0t) == inv.chi + static_cast<std::int64_t>(inv.rho));
  }
}

TEST_CASE("twisted Betti reports are consistent") {
  PrimeField f(1009);
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    Sheaf s = random_sheaf(random_digraph(1 + trial % 3, trial % 5, 40 + trial), f, 3, rng);
    std::size_t last = 0;
    for (std::size_t k = 1; k <= 4; ++k) {
      auto tb = twisted_betti(s, k, trial);
      CHECK(tb.rank >= last);
      last = tb.rank;
      CHECK(static_cast<std::int64_t>(tb.h0t) - static_cast<std::int64_t>(tb.h1t) == s.chi());
      CHECK(static_cast<std::int64_t>(tb.h1t) >= std::max<std::int64_t>(0, -s.chi()));
    }
  }
}

TEST_CASE("characters") {
  auto chars = group_characters(FiniteGroup::cyclic(3), PrimeField(7));
  CHECK(chars.size() == 3);
  auto klein = group_characters(group_from_spec("product:cyclic:2,cyclic:2"), PrimeField(5));
  CHECK(klein.size() == 4);
  CHECK_THROWS_AS(group_characters(FiniteGroup::cyclic(3), PrimeField(5)), InputError);
  CHECK_THROWS_AS(group_characters(FiniteGroup::symmetric(3), PrimeField(7)), InputError);
}

TEST_CASE("Abelian decomposition") {
  // Trivial group: both sides are the homology of F.
  PrimeField f(101);
  Sheaf u = unhappy_bundle(f);
  auto triv = abelian_decomposition_check(
      cover_from_coordinates({bouquet(2), FiniteGroup::cyclic(1), {0, 0}}), u);
  CHECK(triv.decomposition_holds);
  CHECK(triv.h1_pullback == 1);

  // Z/2 cover of B_2 crossing on e1, structure sheaf: the trivial character
  // contributes (h0, h1) = (1, 2), the sign character d = [2 0] gives (0, 1).
  GaloisCover c = cover_from_coordinates({bouquet(2), FiniteGroup::cyclic(2), {1, 0}});
  auto r = abelian_decomposition_check(c, structure_sheaf(bouquet(2), f));
  CHECK(r.h0_pullback == 1);
  CHECK(r.h1_pullback == 3);
  CHECK(r.h0_character_sum == 1);
  CHECK(r.h1_character_sum == 3);
  CHECK(r.decomposition_holds);
  CHECK(r.bound_holds);

  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Digraph g = random_digraph(1 + seed % 3, 1 + seed % 4, 200 + seed);
    PrimeField q(seed % 2 ? 7 : 13);
    Sheaf s = random_sheaf(g, q, 2, rng);
    auto cover = cover_from_coordinates(random_coordinates(g, FiniteGroup::cyclic(3), seed));
    auto d = abelian_decomposition_check(cover, s, 30, seed);
    CHECK(d.decomposition_holds);
    CHECK(d.bound_holds);
  }
}

TEST_CASE("exact grid agrees with random specialization") {
  CHECK(twisted_betti_exhaustive(unhappy_bundle(PrimeField(3))).h1t == 1);
  CHECK(twisted_betti_exhaustive(unhappy_bundle(PrimeField(3))).exact);
  CHECK_THROWS_AS(twisted_betti_exhaustive(unhappy_bundle(PrimeField(2))), InputError);
  CHECK_THROWS_AS(twisted_betti_exhaustive(structure_sheaf(bouquet(30), PrimeField(5))),
                  BudgetError);
  PrimeField f;
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Sheaf s = random_sheaf(random_digraph(1 + trial % 3, trial % 6, 90 + trial), f, 2, rng);
    CHECK(twisted_betti_exhaustive(s).h1t == twisted_betti(s, 3, trial).h1t);
  }
}
