#include "sheaflab/digraph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

#include "sheaflab/error.hpp"
#include "sheaflab/util.hpp"

namespace sheaflab {

std::size_t Digraph::add_vertex(const std::string& name) {
  if (name.empty()) throw InputError("empty vertex identifier");
  if (vertex_index_.count(name)) throw InputError("duplicate vertex '" + name + "'");
  const std::size_t v = vertex_names_.size();
  vertex_names_.push_back(name);
  vertex_index_.emplace(name, v);
  out_.emplace_back();
  in_.emplace_back();
  return v;
}

std::size_t Digraph::add_edge(const std::string& name, std::size_t tail, std::size_t head) {
  if (name.empty()) throw InputError("empty edge identifier");
  if (edge_index_.count(name)) throw InputError("duplicate edge '" + name + "'");
  if (tail >= num_vertices() || head >= num_vertices()) {
    throw InputError("edge '" + name + "' has an endpoint that is not a vertex");
  }
  const std::size_t e = edge_names_.size();
  edge_names_.push_back(name);
  edge_index_.emplace(name, e);
  tail_.push_back(tail);
  head_.push_back(head);
  out_[tail].push_back(e);
  in_[head].push_back(e);
  return e;
}

std::size_t Digraph::add_edge(const std::string& name, const std::string& tail,
                              const std::string& head) {
  return add_edge(name, vertex(tail), vertex(head));
}

std::optional<std::size_t> Digraph::find_vertex(const std::string& name) const {
  auto it = vertex_index_.find(name);
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Digraph::find_edge(const std::string& name) const {
  auto it = edge_index_.find(name);
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Digraph::vertex(const std::string& name) const {
  if (auto v = find_vertex(name)) return *v;
  throw InputError("unknown vertex '" + name + "'");
}

std::size_t Digraph::edge(const std::string& name) const {
  if (auto e = find_edge(name)) return *e;
  throw InputError("unknown edge '" + name + "'");
}

Digraph bouquet(std::size_t loops) {
  Digraph g;
  g.add_vertex("v");
  for (std::size_t i = 1; i <= loops; ++i) g.add_edge("e" + std::to_string(i), 0, 0);
  return g;
}

Bigraph bouquet_bigraph() { return {bouquet(2), {1, 2}}; }

GraphMorphism::GraphMorphism(Digraph source, Digraph target, std::vector<std::size_t> vmap,
                             std::vector<std::size_t> emap)
    : source_(std::move(source)),
      target_(std::move(target)),
      vmap_(std::move(vmap)),
      emap_(std::move(emap)) {
  if (vmap_.size() != source_.num_vertices() || emap_.size() != source_.num_edges()) {
    throw InputError("morphism maps do not cover the source graph");
  }
  for (auto w : vmap_) {
    if (w >= target_.num_vertices()) throw InputError("morphism vertex image out of range");
  }
  for (std::size_t e = 0; e < emap_.size(); ++e) {
    const std::size_t f = emap_[e];
    if (f >= target_.num_edges()) throw InputError("morphism edge image out of range");
    if (target_.tail(f) != vmap_[source_.tail(e)] || target_.head(f) != vmap_[source_.head(e)]) {
      throw InputError("morphism does not commute with head/tail at edge '" +
                       source_.edge_name(e) + "'");
    }
  }
}

GraphMorphism GraphMorphism::identity(const Digraph& g) {
  std::vector<std::size_t> v(g.num_vertices()), e(g.num_edges());
  std::iota(v.begin(), v.end(), 0);
  std::iota(e.begin(), e.end(), 0);
  return GraphMorphism(g, g, std::move(v), std::move(e));
}

GraphMorphism GraphMorphism::colouring(const Bigraph& b) {
  if (b.colour.size() != b.graph.num_edges()) throw InputError("bigraph colouring is partial");
  std::vector<std::size_t> e(b.graph.num_edges());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (b.colour[i] != 1 && b.colour[i] != 2) throw InputError("edge colour must be 1 or 2");
    e[i] = static_cast<std::size_t>(b.colour[i] - 1);
  }
  return GraphMorphism(b.graph, bouquet(2), std::vector<std::size_t>(b.graph.num_vertices(), 0),
                       std::move(e));
}

GraphMorphism GraphMorphism::inclusion(const Digraph& sub, const Digraph& g) {
  std::vector<std::size_t> v(sub.num_vertices()), e(sub.num_edges());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.vertex(sub.vertex_name(i));
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = g.edge(sub.edge_name(i));
  return GraphMorphism(sub, g, std::move(v), std::move(e));
}

std::vector<std::vector<std::size_t>> GraphMorphism::vertex_fibres() const {
  std::vector<std::vector<std::size_t>> out(target_.num_vertices());
  for (std::size_t v = 0; v < vmap_.size(); ++v) out[vmap_[v]].push_back(v);
  return out;
}

std::vector<std::vector<std::size_t>> GraphMorphism::edge_fibres() const {
  std::vector<std::vector<std::size_t>> out(target_.num_edges());
  for (std::size_t e = 0; e < emap_.size(); ++e) out[emap_[e]].push_back(e);
  return out;
}

GraphMorphism GraphMorphism::then(const GraphMorphism& next) const {
  if (!(next.source() == target_)) throw InputError("morphisms are not composable");
  std::vector<std::size_t> v(vmap_.size()), e(emap_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = next.vmap(vmap_[i]);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = next.emap(emap_[i]);
  return GraphMorphism(source_, next.target(), std::move(v), std::move(e));
}

namespace {

// Returns {injective, bijective} for the edge map restricted to one star.
std::pair<bool, bool> local_star(const GraphMorphism& m, const std::vector<std::size_t>& star,
                                 const std::vector<std::size_t>& target_star) {
  std::vector<std::size_t> images;
  images.reserve(star.size());
  for (auto e : star) images.push_back(m.emap(e));
  std::sort(images.begin(), images.end());
  const bool injective = std::adjacent_find(images.begin(), images.end()) == images.end();
  return {injective, injective && images.size() == target_star.size()};
}

}  // namespace

MorphismClass classify_morphism(const GraphMorphism& m) {
  const Digraph& s = m.source();
  const Digraph& t = m.target();
  bool etale = true;
  bool covering = true;
  for (std::size_t v = 0; v < s.num_vertices() && etale; ++v) {
    const std::size_t w = m.vmap(v);
    auto [inj_in, bij_in] = local_star(m, s.in_edges(v), t.in_edges(w));
    auto [inj_out, bij_out] = local_star(m, s.out_edges(v), t.out_edges(w));
    etale = inj_in && inj_out;
    covering = covering && bij_in && bij_out;
  }
  MorphismClass out{MorphismKind::neither, std::nullopt};
  if (etale) out.kind = covering ? MorphismKind::covering : MorphismKind::etale;

  std::optional<std::size_t> d;
  bool uniform = true;
  for (const auto& f : m.vertex_fibres()) {
    if (!d) d = f.size();
    uniform = uniform && f.size() == *d;
  }
  for (const auto& f : m.edge_fibres()) {
    if (!d) d = f.size();
    uniform = uniform && f.size() == *d;
  }
  if (uniform && d) out.degree = d;
  return out;
}

bool is_covering(const GraphMorphism& m) {
  return classify_morphism(m).kind == MorphismKind::covering;
}

bool is_etale(const GraphMorphism& m) {
  return classify_morphism(m).kind != MorphismKind::neither;
}

const char* to_string(MorphismKind k) {
  switch (k) {
    case MorphismKind::covering:
      return "covering";
    case MorphismKind::etale:
      return "etale";
    case MorphismKind::neither:
      break;
  }
  return "neither";
}

FibreProduct fibre_product(const GraphMorphism& f1, const GraphMorphism& f2) {
  if (!(f1.target() == f2.target())) throw InputError("fibre product: targets differ");
  const Digraph& a = f1.source();
  const Digraph& b = f2.source();
  Digraph p;
  std::vector<std::size_t> pv1, pv2, pe1, pe2;
  std::vector<std::vector<std::size_t>> index(a.num_vertices(),
                                              std::vector<std::size_t>(b.num_vertices()));
  for (std::size_t v1 = 0; v1 < a.num_vertices(); ++v1) {
    for (std::size_t v2 = 0; v2 < b.num_vertices(); ++v2) {
      if (f1.vmap(v1) != f2.vmap(v2)) continue;
      index[v1][v2] = p.add_vertex("(" + a.vertex_name(v1) + "," + b.vertex_name(v2) + ")");
      pv1.push_back(v1);
      pv2.push_back(v2);
    }
  }
  for (std::size_t e1 = 0; e1 < a.num_edges(); ++e1) {
    for (std::size_t e2 = 0; e2 < b.num_edges(); ++e2) {
      if (f1.emap(e1) != f2.emap(e2)) continue;
      p.add_edge("(" + a.edge_name(e1) + "," + b.edge_name(e2) + ")",
                 index[a.tail(e1)][b.tail(e2)], index[a.head(e1)][b.head(e2)]);
      pe1.push_back(e1);
      pe2.push_back(e2);
    }
  }
  GraphMorphism first(p, a, std::move(pv1), std::move(pe1));
  GraphMorphism second(p, b, std::move(pv2), std::move(pe2));
  return {std::move(p), std::move(first), std::move(second)};
}

Bigraph fibre_product_over_b2(const Bigraph& k, const Bigraph& l) {
  FibreProduct fp = fibre_product(GraphMorphism::colouring(k), GraphMorphism::colouring(l));
  std::vector<int> colour(fp.graph.num_edges());
  for (std::size_t e = 0; e < colour.size(); ++e) colour[e] = k.colour[fp.first.emap(e)];
  return {std::move(fp.graph), std::move(colour)};
}

Components connected_components(const Digraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::size_t a = find(g.tail(e));
    const std::size_t b = find(g.head(e));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  Components c;
  c.of_vertex.assign(n, 0);
  std::vector<std::size_t> label(n, SIZE_MAX);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = find(v);
    if (label[r] == SIZE_MAX) label[r] = c.count++;
    c.of_vertex[v] = label[r];
  }
  return c;
}

GraphInvariants invariants(const Digraph& g) {
  const Components c = connected_components(g);
  std::vector<std::int64_t> nv(c.count, 0), ne(c.count, 0);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) ++nv[c.of_vertex[v]];
  for (std::size_t e = 0; e < g.num_edges(); ++e) ++ne[c.of_vertex[g.tail(e)]];
  GraphInvariants inv;
  inv.h0 = c.count;
  inv.chi = static_cast<std::int64_t>(g.num_vertices()) - static_cast<std::int64_t>(g.num_edges());
  for (std::size_t i = 0; i < c.count; ++i) {
    const std::int64_t h1 = ne[i] - nv[i] + 1;
    inv.h1 += static_cast<std::size_t>(h1);
    const std::size_t excess = h1 > 1 ? static_cast<std::size_t>(h1 - 1) : 0;
    inv.rho += excess;
    inv.rho_prime = std::max(inv.rho_prime, excess);
    if (h1 == 0) ++inv.acyclic_components;
  }
  return inv;
}

std::size_t reduced_cyclicity(const Digraph& g) { return invariants(g).rho; }

Digraph subgraph(const Digraph& g, const std::vector<bool>& keep_vertex,
                 const std::vector<bool>& keep_edge) {
  if (keep_vertex.size() != g.num_vertices() || keep_edge.size() != g.num_edges()) {
    throw InputError("subgraph masks have the wrong size");
  }
  Digraph s;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    if (keep_vertex[v]) s.add_vertex(g.vertex_name(v));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!keep_edge[e]) continue;
    if (!keep_vertex[g.tail(e)] || !keep_vertex[g.head(e)]) {
      throw InputError("subgraph keeps edge '" + g.edge_name(e) + "' without its endpoints");
    }
    s.add_edge(g.edge_name(e), g.vertex_name(g.tail(e)), g.vertex_name(g.head(e)));
  }
  return s;
}

Digraph component_subgraph(const Digraph& g, const Components& c, std::size_t index) {
  std::vector<bool> kv(g.num_vertices()), ke(g.num_edges());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) kv[v] = c.of_vertex[v] == index;
  for (std::size_t e = 0; e < g.num_edges(); ++e) ke[e] = c.of_vertex[g.tail(e)] == index;
  return subgraph(g, kv, ke);
}

std::optional<std::size_t> girth(const Digraph& g, std::size_t bound) {
  std::size_t best = bound + 1;
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> dist(n), parent_edge(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), SIZE_MAX);
    dist[s] = 0;
    parent_edge[s] = SIZE_MAX;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      if (2 * dist[u] >= best) break;
      auto visit = [&](std::size_t e, std::size_t w) {
        if (e == parent_edge[u]) return;
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[u] + 1;
          parent_edge[w] = e;
          queue.push_back(w);
        } else {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      };
      for (auto e : g.out_edges(u)) visit(e, g.head(e));
      for (auto e : g.in_edges(u)) visit(e, g.tail(e));
    }
  }
  if (best <= bound) return best;
  return std::nullopt;
}

namespace {

// A vertex of the universal Abelian cover: a base vertex plus a finitely
// supported integer vector over the base edges, kept sorted and nonzero.
struct LiftedVertex {
  std::size_t base;
  std::vector<std::pair<std::uint32_t, std::int32_t>> shift;
  bool operator==(const LiftedVertex&) const = default;
};

struct LiftedVertexHash {
  std::size_t operator()(const LiftedVertex& x) const {
    std::uint64_t h = derive_seed(x.base, 0);
    for (auto [e, c] : x.shift) {
      h = derive_seed(h ^ (std::uint64_t{e} << 32 | static_cast<std::uint32_t>(c)), 1);
    }
    return static_cast<std::size_t>(h);
  }
};

LiftedVertex shifted(std::size_t base, const LiftedVertex& from, std::uint32_t e, int delta) {
  LiftedVertex out{base, from.shift};
  auto it = std::lower_bound(out.shift.begin(), out.shift.end(), std::make_pair(e, INT32_MIN));
  if (it != out.shift.end() && it->first == e) {
    it->second += delta;
    if (it->second == 0) out.shift.erase(it);
  } else {
    out.shift.insert(it, {e, delta});
  }
  return out;
}

}  // namespace

std::optional<std::size_t> abelian_girth(const Digraph& g, std::size_t bound) {
  // Edge (e, n) of the cover runs from (te, n + delta_e) to (he, n). The cover
  // is a simple graph, so the parent vertex identifies the parent edge. Every
  // lifted vertex is a translate of some (v, 0), so searching from those is
  // enough to find the shortest cycle.
  std::size_t best = bound + 1;
  const std::size_t depth = (bound + 1) / 2;
  for (std::size_t s = 0; s < g.num_vertices(); ++s) {
    std::vector<LiftedVertex> nodes{{s, {}}};
    std::vector<std::size_t> dist{0}, parent{SIZE_MAX};
    std::unordered_map<LiftedVertex, std::size_t, LiftedVertexHash> index;
    index.emplace(nodes[0], 0);
    for (std::size_t qi = 0; qi < nodes.size(); ++qi) {
      if (2 * dist[qi] >= best) break;
      const LiftedVertex u = nodes[qi];
      auto visit = [&](LiftedVertex w) {
        auto it = index.find(w);
        if (it == index.end()) {
          if (dist[qi] + 1 > depth) return;
          index.emplace(w, nodes.size());
          nodes.push_back(std::move(w));
          dist.push_back(dist[qi] + 1);
          parent.push_back(qi);
        } else if (it->second != parent[qi]) {
          best = std::min(best, dist[qi] + dist[it->second] + 1);
        }
      };
      for (auto e : g.in_edges(u.base)) {
        visit(shifted(g.tail(e), u, static_cast<std::uint32_t>(e), +1));
      }
      for (auto e : g.out_edges(u.base)) {
        visit(shifted(g.head(e), u, static_cast<std::uint32_t>(e), -1));
      }
    }
  }
  if (best <= bound) return best;
  return std::nullopt;
}

Girths girths(const Digraph& g, std::size_t bound) {
  if (bound < 1) throw InputError("girth bound must be at least 1");
  return {girth(g, bound), abelian_girth(g, bound)};
}

bool are_isomorphic(const Digraph& a, const Digraph& b) {
  const std::size_t n = a.num_vertices();
  if (n != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  auto counts = [](const Digraph& g) {
    std::vector<std::vector<std::size_t>> c(g.num_vertices(),
                                            std::vector<std::size_t>(g.num_vertices(), 0));
    for (std::size_t e = 0; e < g.num_edges(); ++e) ++c[g.tail(e)][g.head(e)];
    return c;
  };
  const auto ca = counts(a);
  const auto cb = counts(b);
  auto signature = [](const Digraph& g, const std::vector<std::vector<std::size_t>>& c,
                      std::size_t v) {
    return std::make_tuple(g.in_edges(v).size(), g.out_edges(v).size(), c[v][v]);
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Most constrained first: high degree vertices prune hardest.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a.in_edges(x).size() + a.out_edges(x).size() >
           a.in_edges(y).size() + a.out_edges(y).size();
  });
  std::vector<std::size_t> map(n, SIZE_MAX);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> extend = [&](std::size_t depth) -> bool {
    if (depth == n) return true;
    const std::size_t u = order[depth];
    for (std::size_t w = 0; w < n; ++w) {
      if (used[w] || signature(a, ca, u) != signature(b, cb, w)) continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const std::size_t x = order[d];
        ok = ca[u][x] == cb[w][map[x]] && ca[x][u] == cb[map[x]][w];
      }
      if (!ok) continue;
      map[u] = w;
      used[w] = true;
      if (extend(depth + 1)) return true;
      used[w] = false;
      map[u] = SIZE_MAX;
    }
    return false;
  };
  return extend(0);
}

GraphMorphism random_permutation_cover(const Digraph& g, std::size_t degree, std::uint64_t seed) {
  if (degree == 0) throw InputError("cover degree must be positive");
  Rng rng(seed);
  Digraph c;
  std::vector<std::size_t> vmap, emap;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (std::size_t i = 0; i < degree; ++i) {
      c.add_vertex("(" + g.vertex_name(v) + "," + std::to_string(i) + ")");
      vmap.push_back(v);
    }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    std::vector<std::size_t> sigma(degree);
    std::iota(sigma.begin(), sigma.end(), 0);
    shuffle_in_place(sigma, rng);
    for (std::size_t i = 0; i < degree; ++i) {
      c.add_edge("(" + g.edge_name(e) + "," + std::to_string(i) + ")", g.tail(e) * degree + i,
                 g.head(e) * degree + sigma[i]);
      emap.push_back(e);
    }
  }
  return GraphMorphism(std::move(c), g, std::move(vmap), std::move(emap));
}

Digraph random_digraph(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0 && m > 0) throw InputError("cannot place edges on an empty vertex set");
  Rng rng(seed);
  Digraph g;
  for (std::size_t v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
  for (std::size_t e = 0; e < m; ++e) {
    const std::size_t t = uniform_below(rng, n);
    const std::size_t h = uniform_below(rng, n);
    g.add_edge("e" + std::to_string(e), t, h);
  }
  return g;
}

}  // namespace sheaflab
