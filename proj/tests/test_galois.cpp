#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sheaflab/error.hpp"
#include "sheaflab/galois.hpp"

using namespace sheaflab;

TEST_CASE("built-in groups satisfy the axioms") {
  auto z4 = FiniteGroup::cyclic(4);
  CHECK(z4.order() == 4);
  CHECK(z4.mul(3, 2) == 1);
  CHECK(z4.inv(1) == 3);
  CHECK(z4.is_abelian());
  CHECK(z4.element_order(2) == 2);

  auto s3 = FiniteGroup::symmetric(3);
  CHECK(s3.order() == 6);
  CHECK_FALSE(s3.is_abelian());
  CHECK(s3.name(s3.identity()) == "012");
  // (s t)(i) = s(t(i)): "102" after "021" sends 0->0->1, 1->2->2, 2->1->0.
  CHECK(s3.name(s3.mul(s3.element("102"), s3.element("021"))) == "120");

  auto p = group_from_spec("product:cyclic:2,cyclic:3");
  CHECK(p.order() == 6);
  CHECK(p.is_abelian());
  CHECK(p.element_order(p.element("(1,1)")) == 6);

  CHECK_THROWS_AS(group_from_spec("dihedral:4"), InputError);
  CHECK_THROWS_AS(FiniteGroup({"a", "b"}, {{0, 0}, {0, 0}}), InputError);
}

TEST_CASE("group tables from text") {
  auto g = group_from_table_text(
      "# Klein four\n"
      "elements e a b c\n"
      "e e a b c\n"
      "a a e c b\n"
      "b b c e a\n"
      "c c b a e\n");
  CHECK(g.order() == 4);
  CHECK(g.identity() == 0);
  for (std::size_t x = 0; x < 4; ++x) CHECK(g.element_order(x) == (x == 0 ? 1u : 2u));
  // A Latin square that is not associative.
  CHECK_THROWS_AS(group_from_table_text("elements e a b c d\n"
                                        "e e a b c d\n"
                                        "a a e d b c\n"
                                        "b b c e d a\n"
                                        "c c d a e b\n"
                                        "d d b c a e\n"),
                  InputError);
}

TEST_CASE("trivial coordinates give disjoint copies of the base") {
  Digraph b2 = bouquet(2);
  GaloisCoordinates c{b2, FiniteGroup::cyclic(3), {0, 0}};
  auto cover = cover_from_coordinates(c);
  CHECK(galois_violation(cover).empty());
  auto comps = connected_components(cover.total);
  CHECK(comps.count == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(are_isomorphic(component_subgraph(cover.total, comps, i), b2));
  std::vector<WalkStep> loop{{0, true}, {1, false}};
  CHECK(monodromy(c, 0, loop) == 0);
}

TEST_CASE("double cover of B2 crossing on colour 1") {
  Digraph b2 = bouquet(2);
  GaloisCoordinates c{b2, FiniteGroup::cyclic(2), {1, 0}};
  auto cover = cover_from_coordinates(c);
  CHECK(galois_violation(cover).empty());
  CHECK(monodromy_image(c, 0).size() == 2);
  CHECK(connected_components(cover.total).count == 1);
  auto cls = classify_morphism(cover.projection);
  CHECK(cls.kind == MorphismKind::covering);
  CHECK(cls.degree == 2u);
  // Colour-2 lifts are self-loops.
  for (std::size_t a = 0; a < 2; ++a) {
    const std::size_t e = cover.total.edge("(e2," + std::to_string(a) + ")");
    CHECK(cover.total.tail(e) == cover.total.head(e));
  }
}

TEST_CASE("covers from random coordinates") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Digraph base = random_digraph(1 + seed % 4, 1 + seed % 5, seed);
    FiniteGroup grp = seed % 3 == 0 ? FiniteGroup::symmetric(3) : FiniteGroup::cyclic(2 + seed % 4);
    auto c = random_coordinates(base, grp, seed);
    CHECK(random_coordinates(base, grp, seed).a == c.a);
    auto cover = cover_from_coordinates(c);
    CHECK(galois_violation(cover).empty());
    auto cls = classify_morphism(cover.projection);
    CHECK(cls.kind == MorphismKind::covering);
    CHECK(cls.degree == grp.order());

    auto back = coordinates_from_cover(cover);
    CHECK(back.a == c.a);

    // Connected base with onto monodromy gives a connected cover.
    if (connected_components(base).count == 1 && monodromy_image(c, 0).size() == grp.order()) {
      CHECK(connected_components(cover.total).count == 1);
    }

    // K x_G K splits into |G| copies of K.
    auto fp = fibre_product(cover.projection, cover.projection);
    auto comps = connected_components(fp.graph);
    const auto top_comps = connected_components(cover.total).count;
    CHECK(comps.count == grp.order() * top_comps);
    if (top_comps == 1 && cover.total.num_vertices() <= 12) {
      for (std::size_t i = 0; i < comps.count; ++i)
        CHECK(are_isomorphic(component_subgraph(fp.graph, comps, i), cover.total));
    }
  }
}

TEST_CASE("spanning tree normalization and origin change") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Digraph base = random_digraph(2 + seed % 4, 3 + seed % 4, 100 + seed);
    FiniteGroup grp = FiniteGroup::symmetric(3);
    auto c = random_coordinates(base, grp, seed);
    std::vector<std::size_t> g;
    auto n = normalize_on_spanning_tree(c, &g);
    // Tree edges become trivial: count edges with identity coordinate.
    std::size_t trivial = 0;
    for (auto x : n.a) trivial += x == grp.identity();
    auto comps = connected_components(base);
    CHECK(trivial >= base.num_vertices() - comps.count);
    // Monodromy is conjugated by g at the basepoint.
    std::vector<std::size_t> image = monodromy_image(c, 0);
    std::vector<std::size_t> image_n = monodromy_image(n, 0);
    CHECK(image.size() == image_n.size());
    for (auto e : base.out_edges(0)) {
      if (base.head(e) != 0) continue;
      std::vector<WalkStep> loop{{e, true}};
      const std::size_t before = monodromy(c, 0, loop);
      const std::size_t after = monodromy(n, 0, loop);
      CHECK(after == grp.mul(grp.inv(g[0]), grp.mul(before, g[0])));
    }
    // The covers are isomorphic.
    CHECK(are_isomorphic(cover_from_coordinates(c).total, cover_from_coordinates(n).total));
  }
}

TEST_CASE("monodromy rejects bad walks") {
  Digraph g;
  g.add_vertex("a");
  g.add_vertex("b");
  g.add_edge("x", "a", "b");
  g.add_edge("y", "a", "b");
  GaloisCoordinates c{g, FiniteGroup::cyclic(5), {2, 4}};
  CHECK(monodromy(c, 0, {{0, true}, {1, false}}) == c.group.mul(c.group.inv(4), 2));
  CHECK_THROWS_AS(monodromy(c, 0, {{0, true}}), InputError);
  CHECK_THROWS_AS(monodromy(c, 0, {{0, false}}), InputError);
}

TEST_CASE("Cayley bigraphs") {
  auto z2 = FiniteGroup::cyclic(2);
  Bigraph c = cayley_bigraph(z2, 1, 1);
  CHECK(c.graph.num_vertices() == 2);
  CHECK(c.graph.num_edges() == 4);
  for (std::size_t v = 0; v < 2; ++v) {
    CHECK(c.graph.in_edges(v).size() == 2);
    CHECK(c.graph.out_edges(v).size() == 2);
  }
  CHECK(invariants(c.graph).rho == 2);

  auto z3 = FiniteGroup::cyclic(3);
  Bigraph d = cayley_bigraph(z3, 1, 2);
  for (std::size_t x = 0; x < 3; ++x) {
    const std::size_t e = d.graph.edge("(" + std::to_string(x) + ",2)");
    CHECK(d.graph.head(e) == (x + 2) % 3);
    CHECK(d.colour[e] == 2);
  }
  auto cls = classify_morphism(GraphMorphism::colouring(d));
  CHECK(cls.kind == MorphismKind::covering);
  CHECK(cls.degree == 3u);

  auto s3 = FiniteGroup::symmetric(3);
  auto cover = cayley_cover(s3, s3.element("102"), s3.element("120"));
  CHECK(galois_violation(cover).empty());
}

TEST_CASE("normal extension") {
  Digraph b2 = bouquet(2);
  // Degree 1.
  auto one = normal_extension(GraphMorphism::identity(b2));
  CHECK(galois_violation(one).empty());
  CHECK(are_isomorphic(one.total, b2));

  // Degree 2: already Galois, group S_2, fibres of size 2.
  GaloisCoordinates c2{b2, FiniteGroup::cyclic(2), {0, 1}};
  auto two = normal_extension(cover_from_coordinates(c2).projection);
  CHECK(galois_violation(two).empty());
  CHECK(two.group.order() == 2);
  for (const auto& f : two.projection.vertex_fibres()) CHECK(f.size() == 2);

  // Degree 3 non-Galois cover: fibres of size 6.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto cover = random_permutation_cover(b2, 3, seed);
    if (connected_components(cover.source()).count != 1) continue;
    auto three = normal_extension(cover);
    CHECK(galois_violation(three).empty());
    for (const auto& f : three.projection.vertex_fibres()) CHECK(f.size() == 6);
  }

  GraphMorphism inc = GraphMorphism::inclusion(bouquet(1), b2);
  CHECK_THROWS_AS(normal_extension(inc), InputError);
}
