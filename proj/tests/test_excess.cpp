#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sheaflab/error.hpp"
#include "sheaflab/excess.hpp"

using namespace sheaflab;

namespace {

MaxExcessOptions with(ExcessMethod m) {
  MaxExcessOptions o;
  o.method = m;
  return o;
}

bool same(const CompartmentalizedSubspace& a, const CompartmentalizedSubspace& b) {
  return a.per_vertex == b.per_vertex;
}

// A random sheaf small enough for brute force over GF(q).
Sheaf small_sheaf(std::uint64_t seed, const PrimeField& f, std::size_t max_dim = 2) {
  Rng rng(seed);
  Digraph g = random_digraph(1 + seed % 3, 1 + seed % 4, seed);
  return random_sheaf(g, f, max_dim, rng);
}

}  // namespace

TEST_CASE("excess of the extreme subspaces") {
  PrimeField f(3);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Sheaf s = small_sheaf(seed, f);
    // Gamma(0) is the common kernel of head and tail at each edge.
    std::int64_t common = 0;
    for (std::size_t e = 0; e < s.base().num_edges(); ++e)
      common += kernel(f, vstack(s.head(e), s.tail(e))).dim();
    CHECK(gamma_excess(s, zero_subspace(s)).excess == common);
    CHECK(gamma_excess(s, full_subspace(s)).excess == -s.chi());
  }
  // With injective restrictions Gamma(0) = 0.
  Sheaf u = unhappy_bundle(f);
  CHECK(gamma_excess(u, zero_subspace(u)).excess == 0);
  CHECK(gamma_excess(u, full_subspace(u)).excess == 0);  // chi = 4 - 4

  Sheaf b2 = structure_sheaf(bouquet(2), f);
  auto r = gamma_excess(b2, full_subspace(b2));
  CHECK(r.excess == 1);
  CHECK(r.profile.edge == std::vector<std::size_t>{1, 1});
  CHECK(r.profile.chi() == -1);
  CHECK(r.profile.total() == 3);

  CHECK_THROWS_AS(gamma_excess(b2, full_subspace(u)), InputError);
}

TEST_CASE("maximum excess of structure sheaves is rho") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Digraph g = random_digraph(1 + seed % 4, seed % 7, seed);
    const std::size_t rho = invariants(g).rho;
    for (std::uint64_t q : {2, 3}) {
      auto r = max_excess(structure_sheaf(g, PrimeField(q)), with(ExcessMethod::Brute));
      CHECK(r.value == rho);
      CHECK(gamma_excess(structure_sheaf(g, PrimeField(q)), *r.witness).excess ==
            static_cast<std::int64_t>(rho));
    }
    CHECK(max_excess(structure_sheaf(g, PrimeField()), with(ExcessMethod::EdgeSimple)).value == rho);
  }
}

TEST_CASE("unhappy bundle") {
  for (std::uint64_t q : {2, 3}) {
    Sheaf u = unhappy_bundle(PrimeField(q));
    auto r = max_excess(u, with(ExcessMethod::Brute));
    CHECK(r.value == 0);
    CHECK(r.enumerated == count_subspaces(q, 4));
    CHECK(max_excess_subsheaf_oracle(u).value == 0);

    GaloisCover c = cover_from_coordinates({bouquet(2), FiniteGroup::cyclic(2), {0, 1}});
    Sheaf up = pullback(c.projection, u);
    CHECK(max_excess(up, with(ExcessMethod::Brute)).value == 0);
  }
  // Auto falls back to brute force over small fields.
  CHECK(max_excess(unhappy_bundle(PrimeField(2))).method == ExcessMethod::Brute);
  // The pullback method needs Abelian girth 17, out of reach of a small search.
  MaxExcessOptions o = with(ExcessMethod::Pullback);
  o.cover.max_degree = 4;
  o.cover.attempts_per_degree = 2;
  CHECK_THROWS_AS(max_excess(unhappy_bundle(PrimeField()), o), BudgetError);
}

TEST_CASE("method preconditions") {
  CHECK_THROWS_AS(max_excess(unhappy_bundle(PrimeField(5)), with(ExcessMethod::Brute)), InputError);
  CHECK_THROWS_AS(max_excess(unhappy_bundle(PrimeField(2)), with(ExcessMethod::EdgeSimple)),
                  InputError);
  MaxExcessOptions tight = with(ExcessMethod::Brute);
  tight.budget = 10;
  CHECK_THROWS_AS(max_excess(unhappy_bundle(PrimeField(2)), tight), BudgetError);
  CHECK(parse_excess_method("edge-simple") == ExcessMethod::EdgeSimple);
  CHECK_THROWS_AS(parse_excess_method("magic"), InputError);
}

TEST_CASE("pullback method on graphs of large Abelian girth") {
  // A tree and a single loop have infinite Abelian girth: the identity cover
  // certifies and the answer is the twisted h1.
  PrimeField f;
  Digraph path;
  path.add_vertex("a");
  path.add_vertex("b");
  path.add_vertex("c");
  path.add_edge("x", "a", "b");
  path.add_edge("y", "c", "b");
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    Sheaf s = random_sheaf(trial % 2 ? path : bouquet(1), f, 3, rng);
    auto r = max_excess(s, with(ExcessMethod::Pullback));
    CHECK(r.cover_degree == 1);
    CHECK(r.value == twisted_betti(s).h1t);
  }
}

TEST_CASE("high Abelian girth covers") {
  auto b2 = high_abelian_girth_cover(bouquet(2), 4);
  REQUIRE(b2.cover);
  CHECK(b2.degree == 1);
  auto b1 = high_abelian_girth_cover(bouquet(1), 1000);
  REQUIRE(b1.cover);
  CHECK(b1.degree == 1);

  auto b6 = high_abelian_girth_cover(bouquet(2), 6, {8, 8, 1});
  REQUIRE(b6.cover);
  CHECK(b6.degree > 1);
  CHECK(is_covering(*b6.cover));
  auto ag = abelian_girth(b6.cover->source(), 6);
  CHECK((!ag || *ag >= 6));

  auto none = high_abelian_girth_cover(bouquet(2), 17, {3, 2, 0});
  CHECK(!none.cover);
  CHECK(none.best_girth >= 4);
  CHECK(none.best_girth < 17);
}

TEST_CASE("brute force and the subsheaf oracle agree") {
  PrimeField f(2);
  CHECK(max_excess_subsheaf_oracle(zero_sheaf(bouquet(2), f)).value == 0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Sheaf s = small_sheaf(1000 + seed, f);
    auto brute = max_excess(s, with(ExcessMethod::Brute));
    auto oracle = max_excess_subsheaf_oracle(s);
    CHECK(brute.value == oracle.value);
    check_morphism(*oracle.witness);
    CHECK(brute.value >= static_cast<std::size_t>(std::max<std::int64_t>(0, -s.chi())));
  }
}

TEST_CASE("indicator sheaf of a subgraph") {
  // F_K inside F_G: the oracle's value is rho(K).
  PrimeField f(2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Digraph g = random_digraph(2 + seed % 3, 2 + seed % 5, 500 + seed);
    std::vector<bool> keep_v(g.num_vertices(), true), keep_e(g.num_edges());
    Rng rng(seed);
    for (std::size_t e = 0; e < keep_e.size(); ++e) keep_e[e] = rng() % 3 != 0;
    Digraph k = subgraph(g, keep_v, keep_e);
    Sheaf ind = indicator_sheaf(GraphMorphism::inclusion(k, g), f);
    CHECK(max_excess_subsheaf_oracle(ind).value == invariants(k).rho);
  }
}

TEST_CASE("edge-simple method agrees with brute force") {
  for (std::uint64_t q : {2, 3}) {
    PrimeField f(q);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Rng rng(seed);
      Digraph g = random_digraph(1 + seed % 3, 1 + seed % 5, 700 + seed);
      Sheaf s = random_sheaf(g, f, 2, rng, 1);
      auto es = max_excess(s, with(ExcessMethod::EdgeSimple));
      CHECK(es.exact);
      CHECK(es.value == max_excess(s, with(ExcessMethod::Brute)).value);
      CHECK(max_excess(s).method == ExcessMethod::EdgeSimple);
    }
  }
}

TEST_CASE("twisted h1 bounds the maximum excess") {
  for (std::uint64_t q : {2, 3}) {
    PrimeField f(q);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      Sheaf s = small_sheaf(3000 + seed, f);
      std::size_t k = 0;
      for (auto d : s.edims()) k = std::max(k, d);
      if (k >= q) continue;
      CHECK(twisted_betti_exhaustive(s).h1t >= max_excess(s, with(ExcessMethod::Brute)).value);
    }
  }
}

TEST_CASE("maximum excess scales under coverings") {
  PrimeField f(2);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    Digraph g = random_digraph(1 + seed % 2, 1 + seed % 3, 900 + seed);
    Sheaf s = random_sheaf(g, f, 2, rng);
    const std::size_t d = 2 + seed % 2;
    GraphMorphism c = random_permutation_cover(g, d, seed);
    Sheaf up = pullback(c, s);
    MaxExcessOptions o = with(ExcessMethod::Brute);
    if (count_compartmentalized(up) > o.budget) continue;
    CHECK(max_excess(up, o).value == d * max_excess(s, o).value);
  }
}

TEST_CASE("supermodularity") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    PrimeField f(seed % 2 ? 3 : 101);
    Rng rng(seed);
    Sheaf s = random_sheaf(random_digraph(1 + seed % 4, seed % 7, seed), f, 3, rng);
    auto u1 = random_compartmentalized(s, rng);
    auto u2 = random_compartmentalized(s, rng);
    CHECK(gamma_excess(s, u1).excess + gamma_excess(s, u2).excess <=
          gamma_excess(s, intersect(u1, u2)).excess + gamma_excess(s, sum(u1, u2)).excess);
  }
}

TEST_CASE("maximizers form a lattice") {
  PrimeField f(2);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Sheaf s = small_sheaf(5000 + seed, f);
    MaxExcessOptions o = with(ExcessMethod::Brute);
    o.collect_maximizers = 100000;
    auto r = max_excess(s, o);
    REQUIRE(!r.maximizers.empty());
    CHECK(same(r.maximizers.front(), *r.witness));
    auto is_max = [&](const CompartmentalizedSubspace& u) {
      for (const auto& m : r.maximizers)
        if (same(m, u)) return true;
      return false;
    };
    for (const auto& a : r.maximizers) {
      CHECK(gamma_excess(s, a).excess == static_cast<std::int64_t>(r.value));
      for (const auto& b : r.maximizers) {
        CHECK(is_max(intersect(a, b)));
        CHECK(is_max(sum(a, b)));
      }
    }
  }
}

TEST_CASE("brute force is deterministic across thread counts") {
  PrimeField f(3);
  Sheaf s = small_sheaf(77, f);
  MaxExcessOptions o = with(ExcessMethod::Brute);
  o.collect_maximizers = 50;
  auto a = max_excess(s, o);
  setenv("SHEAFLAB_THREADS", "1", 1);
  auto b = max_excess(s, o);
  unsetenv("SHEAFLAB_THREADS");
  CHECK(a.value == b.value);
  CHECK(same(*a.witness, *b.witness));
  REQUIRE(a.maximizers.size() == b.maximizers.size());
  for (std::size_t i = 0; i < a.maximizers.size(); ++i) CHECK(same(a.maximizers[i], b.maximizers[i]));
}
