#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sheaflab/digraph.hpp"
#include "sheaflab/error.hpp"

using namespace sheaflab;

namespace {

Digraph cycle(std::size_t n) {
  Digraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex("c" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) g.add_edge("f" + std::to_string(i), i, (i + 1) % n);
  return g;
}

}  // namespace

TEST_CASE("construction rejects bad identifiers") {
  Digraph g;
  g.add_vertex("v");
  CHECK_THROWS_AS(g.add_vertex("v"), InputError);
  g.add_edge("e", "v", "v");
  CHECK_THROWS_AS(g.add_edge("e", "v", "v"), InputError);
  CHECK_THROWS_AS(g.add_edge("f", "v", "w"), InputError);
}

TEST_CASE("invariants of bouquets") {
  auto b1 = invariants(bouquet(1));
  CHECK(b1.h0 == 1);
  CHECK(b1.h1 == 1);
  CHECK(b1.chi == 0);
  CHECK(b1.rho == 0);
  auto b2 = invariants(bouquet(2));
  CHECK(b2.h0 == 1);
  CHECK(b2.h1 == 2);
  CHECK(b2.chi == -1);
  CHECK(b2.rho == 1);
  CHECK(b2.rho_prime == 1);
}

TEST_CASE("disjoint union invariants") {
  Digraph g;
  g.add_vertex("a");
  g.add_vertex("b");
  g.add_vertex("c");
  g.add_edge("x", "a", "a");
  g.add_edge("y", "b", "b");
  g.add_edge("z", "b", "b");
  g.add_edge("w", "b", "b");
  auto inv = invariants(g);
  CHECK(inv.h0 == 3);
  CHECK(inv.h1 == 4);
  CHECK(inv.rho == 2);
  CHECK(inv.rho_prime == 2);
  CHECK(inv.acyclic_components == 1);
  CHECK(static_cast<std::int64_t>(inv.h0) - static_cast<std::int64_t>(inv.h1) == inv.chi);
}

TEST_CASE("morphism classification") {
  Digraph b2 = bouquet(2);
  auto id = classify_morphism(GraphMorphism::identity(b2));
  CHECK(id.kind == MorphismKind::covering);
  CHECK(id.degree == 1u);

  Digraph b1 = bouquet(1);
  auto inc = classify_morphism(GraphMorphism::inclusion(b1, b2));
  CHECK(inc.kind == MorphismKind::etale);

  // Both loops of B_2 onto the single loop of B_1: not locally injective.
  GraphMorphism fold(b2, b1, {0}, {0, 0});
  CHECK(classify_morphism(fold).kind == MorphismKind::neither);

  CHECK_THROWS_AS(GraphMorphism(cycle(2), b1, {0, 0}, {0, 1}), InputError);
}

TEST_CASE("fibre products") {
  Digraph b2 = bouquet(2);
  auto id = GraphMorphism::identity(b2);
  auto fp = fibre_product(id, id);
  CHECK(fp.graph.num_vertices() == 1);
  CHECK(fp.graph.num_edges() == 2);
  CHECK(fp.graph.vertex_name(0) == "(v,v)");
  CHECK(are_isomorphic(fp.graph, b2));

  auto c = random_permutation_cover(b2, 3, 9);
  auto fc = fibre_product(c, id);
  CHECK(is_covering(fc.second));
  CHECK(are_isomorphic(fc.graph, c.source()));

  auto other = GraphMorphism::identity(bouquet(1));
  CHECK_THROWS_AS(fibre_product(id, other), InputError);
}

TEST_CASE("girths") {
  auto b1 = girths(bouquet(1), 30);
  CHECK(b1.girth == 1u);
  CHECK_FALSE(b1.abelian_girth.has_value());
  auto b2 = girths(bouquet(2), 30);
  CHECK(b2.girth == 1u);
  CHECK(b2.abelian_girth == 4u);
  CHECK_FALSE(girths(bouquet(2), 3).abelian_girth.has_value());
  for (std::size_t n = 2; n <= 7; ++n) CHECK(girth(cycle(n), 10) == n);
  CHECK_FALSE(girth(cycle(7), 6).has_value());
  // A single cycle lifts to a bi-infinite path.
  CHECK_FALSE(abelian_girth(cycle(4), 20).has_value());
  // Parallel edges f0, g plus return edge f1: the shortest walk with zero
  // abelianization is f0 f1 g f0^-1 f1^-1 g^-1.
  Digraph par = cycle(2);
  par.add_edge("g", 0, 1);
  CHECK(girth(par, 10) == 2u);
  auto ag = abelian_girth(par, 10);
  REQUIRE(ag.has_value());
  CHECK(*ag == 6u);
}

TEST_CASE("abelian girth is at least the girth on random graphs") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Digraph g = random_digraph(1 + seed % 5, seed % 7, seed);
    auto gs = girths(g, 12);
    if (gs.abelian_girth) {
      REQUIRE(gs.girth.has_value());
      CHECK(*gs.abelian_girth >= *gs.girth);
    }
  }
}

TEST_CASE("covers scale chi and rho") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Digraph g = random_digraph(1 + seed % 6, seed % 9, seed * 31 + 1);
    const std::size_t d = 1 + seed % 4;
    auto cover = random_permutation_cover(g, d, seed);
    auto cls = classify_morphism(cover);
    CHECK(cls.kind == MorphismKind::covering);
    if (g.num_vertices() > 0) CHECK(cls.degree == d);
    auto base = invariants(g);
    auto top = invariants(cover.source());
    CHECK(top.chi == static_cast<std::int64_t>(d) * base.chi);
    CHECK(top.rho == d * base.rho);
  }
}

TEST_CASE("isomorphism checker") {
  CHECK(are_isomorphic(cycle(5), cycle(5)));
  CHECK_FALSE(are_isomorphic(cycle(5), cycle(4)));
  Digraph a = cycle(4);
  Digraph b = cycle(4);
  a.add_edge("x", 0, 2);
  b.add_edge("x", 2, 0);
  // Reversal of a chord on a directed 4-cycle is still isomorphic by rotation.
  CHECK(are_isomorphic(a, b));
  Digraph c = cycle(4);
  c.add_edge("x", 0, 1);
  CHECK_FALSE(are_isomorphic(a, c));
}

TEST_CASE("components") {
  Digraph g = random_digraph(6, 2, 4);
  auto c = connected_components(g);
  std::size_t total = 0;
  for (std::size_t i = 0; i < c.count; ++i) total += component_subgraph(g, c, i).num_vertices();
  CHECK(total == 6);
}
