#include "sheaflab/rho.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "sheaflab/error.hpp"
#include "sheaflab/util.hpp"

namespace sheaflab {

CayleyContext::CayleyContext(FiniteGroup g, std::size_t gen1, std::size_t gen2)
    : group(std::move(g)), g1(gen1), g2(gen2), cayley(cayley_bigraph(group, gen1, gen2)) {}

std::size_t CayleyContext::translate_vertex(std::size_t v, std::size_t g) const {
  return group.mul(v, g);
}

std::size_t CayleyContext::translate_edge(std::size_t e, std::size_t g) const {
  const std::size_t n = order();
  return e / n * n + group.mul(e % n, g);
}

SubgraphMask full_mask(const Digraph& g) {
  return {std::vector<bool>(g.num_vertices(), true), std::vector<bool>(g.num_edges(), true)};
}

SubgraphMask mask_from_digraph(const Digraph& g, const Digraph& sub) {
  SubgraphMask m{std::vector<bool>(g.num_vertices(), false),
                 std::vector<bool>(g.num_edges(), false)};
  for (std::size_t v = 0; v < sub.num_vertices(); ++v) {
    auto at = g.find_vertex(sub.vertex_name(v));
    if (!at) throw InputError("subgraph vertex '" + sub.vertex_name(v) + "' is not in the graph");
    m.vertex[*at] = true;
  }
  for (std::size_t e = 0; e < sub.num_edges(); ++e) {
    auto at = g.find_edge(sub.edge_name(e));
    if (!at) throw InputError("subgraph edge '" + sub.edge_name(e) + "' is not in the graph");
    if (g.vertex_name(g.tail(*at)) != sub.vertex_name(sub.tail(e)) ||
        g.vertex_name(g.head(*at)) != sub.vertex_name(sub.head(e))) {
      throw InputError("subgraph edge '" + sub.edge_name(e) + "' has different endpoints");
    }
    m.edge[*at] = true;
  }
  return m;
}

Digraph mask_subgraph(const Digraph& g, const SubgraphMask& m) {
  return subgraph(g, m.vertex, m.edge);
}

Bigraph mask_bigraph(const Bigraph& g, const SubgraphMask& m) {
  Bigraph out{mask_subgraph(g.graph, m), {}};
  for (std::size_t e = 0; e < m.edge.size(); ++e)
    if (m.edge[e]) out.colour.push_back(g.colour[e]);
  return out;
}

std::vector<SubgraphMask> all_subgraphs(const Digraph& g, std::uint64_t budget) {
  const std::size_t n = g.num_vertices();
  if (n >= 63) throw BudgetError("too many vertices to enumerate subgraphs");
  std::uint64_t count = 0;
  std::vector<std::vector<std::size_t>> available(std::uint64_t{1} << n);
  for (std::uint64_t vs = 0; vs < (std::uint64_t{1} << n); ++vs) {
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      if ((vs >> g.tail(e) & 1) && (vs >> g.head(e) & 1)) available[vs].push_back(e);
    if (available[vs].size() >= 63) throw BudgetError("too many edges to enumerate subgraphs");
    count += std::uint64_t{1} << available[vs].size();
    if (count > budget) {
      throw BudgetError("more than " + std::to_string(budget) + " subgraphs to enumerate");
    }
  }
  std::vector<SubgraphMask> out;
  out.reserve(count);
  for (std::uint64_t vs = 0; vs < available.size(); ++vs) {
    const auto& av = available[vs];
    for (std::uint64_t es = 0; es < (std::uint64_t{1} << av.size()); ++es) {
      SubgraphMask m{std::vector<bool>(n), std::vector<bool>(g.num_edges())};
      for (std::size_t v = 0; v < n; ++v) m.vertex[v] = vs >> v & 1;
      for (std::size_t i = 0; i < av.size(); ++i) m.edge[av[i]] = es >> i & 1;
      out.push_back(std::move(m));
    }
  }
  return out;
}

OrbitSets orbit_sets(const CayleyContext& c, const SubgraphMask& l) {
  const Digraph& g = c.cayley.graph;
  // Validates sizes and endpoints.
  const Digraph sub = mask_subgraph(g, l);
  OrbitSets o;
  o.rho = invariants(sub).rho;
  o.vertex.resize(g.num_vertices());
  o.edge.resize(g.num_edges());
  for (std::size_t x = 0; x < c.order(); ++x) {
    const std::size_t xi = c.group.inv(x);
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
      if (l.vertex[c.translate_vertex(v, xi)]) o.vertex[v].push_back(x);
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      if (l.edge[c.translate_edge(e, xi)]) o.edge[e].push_back(x);
  }
  return o;
}

namespace {

// Embeds a vector on the coordinates `from` into the coordinates `into`,
// both sorted with from a subset of into.
std::vector<Residue> embed(std::span<const Residue> x, const std::vector<std::size_t>& from,
                           const std::vector<std::size_t>& into) {
  std::vector<Residue> out(into.size(), 0);
  std::size_t j = 0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    while (into[j] != from[i]) ++j;
    out[j] = x[i];
  }
  return out;
}

// Inclusion of an edge value into an endpoint value, in their echelon bases.
Matrix restriction(const Subspace& edge_value, const std::vector<std::size_t>& te,
                   const Subspace& vertex_value, const std::vector<std::size_t>& tv) {
  Matrix r(vertex_value.dim(), edge_value.dim());
  for (std::size_t j = 0; j < edge_value.dim(); ++j) {
    const auto coords = vertex_value.coordinates(embed(edge_value.basis().row(j), te, tv));
    for (std::size_t i = 0; i < coords.size(); ++i) r(i, j) = coords[i];
  }
  return r;
}

}  // namespace

RhoKernel build_kernel(const CayleyContext& c, const SubgraphMask& l, std::size_t k, const Matrix& m,
                       const PrimeField& f) {
  if (m.rows() != k || m.cols() != c.order()) {
    throw InputError("M must be " + std::to_string(k) + " x " + std::to_string(c.order()));
  }
  OrbitSets gl = orbit_sets(c, l);
  const Digraph& g = c.cayley.graph;
  auto value = [&](const std::vector<std::size_t>& t, const std::string& what) {
    const Matrix mt = select_columns(m, t);
    const RankKernel rk = rank_kernel(f, mt);
    if (rk.rank != k) {
      throw InputError("M is not L-surjective at " + what + ": columns over gl span dimension " +
                       std::to_string(rk.rank) + " < " + std::to_string(k));
    }
    return rk.kernel;
  };
  std::vector<Subspace> vv, ev;
  std::vector<std::size_t> vdim, edim;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    vv.push_back(value(gl.vertex[v], "vertex " + g.vertex_name(v)));
    vdim.push_back(vv.back().dim());
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    ev.push_back(value(gl.edge[e], "edge " + g.edge_name(e)));
    edim.push_back(ev.back().dim());
  }
  std::vector<Matrix> head, tail;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    head.push_back(restriction(ev[e], gl.edge[e], vv[g.head(e)], gl.vertex[g.head(e)]));
    tail.push_back(restriction(ev[e], gl.edge[e], vv[g.tail(e)], gl.vertex[g.tail(e)]));
  }
  Sheaf sheaf(g, f, std::move(vdim), std::move(edim), std::move(head), std::move(tail));
  return {std::move(gl), k, m, std::move(vv), std::move(ev), std::move(sheaf)};
}

Matrix translate_columns(const CayleyContext& c, const Matrix& m, std::size_t g) {
  Matrix out(m.rows(), m.cols());
  const std::size_t gi = c.group.inv(g);
  for (std::size_t h = 0; h < m.cols(); ++h) {
    const std::size_t src = c.group.mul(h, gi);
    for (std::size_t r = 0; r < m.rows(); ++r) out(r, h) = m(r, src);
  }
  return out;
}

namespace {

std::uint64_t to_mask(const std::vector<std::size_t>& set) {
  std::uint64_t m = 0;
  for (auto x : set) m |= std::uint64_t{1} << x;
  return m;
}

std::int64_t trunc(std::uint64_t mask, std::size_t k) {
  const auto n = static_cast<std::int64_t>(std::popcount(mask));
  return std::max<std::int64_t>(0, n - static_cast<std::int64_t>(k));
}

struct MaskSets {
  std::vector<std::uint64_t> vertex, edge;
};

MaskSets masks_of(const CayleyContext& c, const OrbitSets& gl) {
  if (c.order() > 64) throw InputError("vertex families need a group of order at most 64");
  MaskSets m;
  for (const auto& s : gl.vertex) m.vertex.push_back(to_mask(s));
  for (const auto& s : gl.edge) m.edge.push_back(to_mask(s));
  return m;
}

// Submasks of `mask` in increasing numeric order.
std::vector<std::uint64_t> submasks(std::uint64_t mask) {
  std::vector<std::uint64_t> out;
  std::uint64_t s = 0;
  for (;;) {
    out.push_back(s);
    if (s == mask) break;
    s = (s - mask) & mask;  // next submask upwards
  }
  return out;
}

}  // namespace

std::int64_t family_deficit(const CayleyContext& c, const OrbitSets& gl, const VertexFamily& fam) {
  const Digraph& g = c.cayley.graph;
  const MaskSets ms = masks_of(c, gl);
  if (fam.u.size() != g.num_vertices()) throw InputError("vertex family needs one set per vertex");
  std::int64_t d = 0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (fam.u[v] & ~ms.vertex[v]) throw InputError("vertex family leaves gl at " + g.vertex_name(v));
    d -= trunc(fam.u[v], gl.rho);
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    d += trunc(fam.u[g.tail(e)] & fam.u[g.head(e)] & ms.edge[e], gl.rho);
  return d;
}

namespace {

struct FamilySearch {
  const Digraph& g;
  const MaskSets& ms;
  std::size_t rho;
  std::vector<std::vector<std::uint64_t>> choices;
  // Edges grouped by the larger endpoint index: they become exact when that
  // vertex is assigned.
  std::vector<std::vector<std::size_t>> closing;

  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  std::vector<std::uint64_t> best_family;
  std::vector<std::uint64_t> current;
  std::uint64_t visited = 0;

  FamilySearch(const Digraph& graph, const MaskSets& masks, std::size_t r)
      : g(graph), ms(masks), rho(r), closing(graph.num_vertices()), current(graph.num_vertices()) {
    for (auto m : ms.vertex) choices.push_back(submasks(m));
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      closing[std::max(g.tail(e), g.head(e))].push_back(e);
  }

  // Largest possible contribution of the edges still open at depth d, with
  // unassigned endpoints taken as all of gl.
  std::int64_t optimistic(std::size_t d) const {
    std::int64_t bound = 0;
    for (std::size_t v = d; v < closing.size(); ++v)
      for (auto e : closing[v]) {
        std::uint64_t m = ms.edge[e];
        if (g.tail(e) < d) m &= current[g.tail(e)];
        if (g.head(e) < d) m &= current[g.head(e)];
        bound += trunc(m, rho);
      }
    return bound;
  }

  void run(std::size_t d, std::int64_t value) {
    if (d == current.size()) {
      ++visited;
      if (value > best) {
        best = value;
        best_family = current;
      }
      return;
    }
    for (auto s : choices[d]) {
      current[d] = s;
      std::int64_t v = value - trunc(s, rho);
      for (auto e : closing[d]) v += trunc(current[g.tail(e)] & current[g.head(e)] & ms.edge[e], rho);
      if (best_family.size() && v + optimistic(d + 1) <= best) continue;
      run(d + 1, v);
    }
  }
};

}  // namespace

FamilyCheck vertex_family_check(const CayleyContext& c, const SubgraphMask& l,
                                const FamilyCheckOptions& opt) {
  const OrbitSets gl = orbit_sets(c, l);
  const MaskSets ms = masks_of(c, gl);
  const Digraph& g = c.cayley.graph;
  const std::size_t n = g.num_vertices();
  FamilyCheck r;

  std::uint64_t count = 1;
  bool over = false;
  for (auto m : ms.vertex) {
    const int bits = std::popcount(m);
    if (bits >= 63 || count > (opt.budget >> bits)) {
      over = true;
      break;
    }
    count <<= bits;
  }
  if (over || count > opt.budget) {
    if (opt.samples_over_budget == 0) {
      throw BudgetError("vertex family space exceeds the budget of " + std::to_string(opt.budget));
    }
    r.exhaustive = false;
    r.families = opt.samples_over_budget;
    r.worst_deficit = std::numeric_limits<std::int64_t>::min();
    for (std::uint64_t i = 0; i < opt.samples_over_budget; ++i) {
      Rng rng(derive_seed(opt.seed, i));
      VertexFamily fam{std::vector<std::uint64_t>(n)};
      for (std::size_t v = 0; v < n; ++v) fam.u[v] = rng() & ms.vertex[v];
      const std::int64_t d = family_deficit(c, gl, fam);
      ++r.visited;
      if (d > r.worst_deficit || (d == r.worst_deficit && fam.u < r.worst.u)) {
        r.worst_deficit = d;
        r.worst = fam;
      }
    }
    r.holds = r.worst_deficit <= 0;
    return r;
  }
  r.families = count;
  if (n == 0) {
    r.visited = 1;
    return r;
  }

  // One independent search per choice at vertex 0, so that pruning and the
  // visit count do not depend on the thread count.
  const std::vector<std::uint64_t> first = submasks(ms.vertex[0]);
  std::vector<FamilySearch> parts;
  for (std::size_t i = 0; i < first.size(); ++i) parts.emplace_back(g, ms, gl.rho);
  parallel_chunks(first.size(), thread_budget(), [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      FamilySearch& s = parts[i];
      s.choices[0] = {first[i]};
      s.run(0, 0);
    }
  });
  r.worst_deficit = std::numeric_limits<std::int64_t>::min();
  for (auto& s : parts) {
    r.visited += s.visited;
    if (!s.best_family.empty() && s.best > r.worst_deficit) {
      r.worst_deficit = s.best;
      r.worst.u = s.best_family;
    }
  }
  r.holds = r.worst_deficit <= 0;
  return r;
}

DeficitDecomposition decompose_deficit(const CayleyContext& c, const SubgraphMask& l,
                                       const VertexFamily& fam) {
  const OrbitSets gl = orbit_sets(c, l);
  const MaskSets ms = masks_of(c, gl);
  const Digraph& g = c.cayley.graph;
  DeficitDecomposition out;
  out.rho = gl.rho;
  out.deficit = family_deficit(c, gl, fam);

  SubgraphMask lp{std::vector<bool>(g.num_vertices()), std::vector<bool>(g.num_edges())};
  std::vector<std::uint64_t> ue(g.num_edges());
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    lp.vertex[v] = static_cast<std::size_t>(std::popcount(fam.u[v])) > gl.rho;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    ue[e] = fam.u[g.tail(e)] & fam.u[g.head(e)] & ms.edge[e];
    lp.edge[e] = static_cast<std::size_t>(std::popcount(ue[e])) > gl.rho;
  }
  out.l_prime = mask_subgraph(g, lp);

  auto vname = [&](std::size_t v, std::size_t x) {
    const std::size_t below = c.translate_vertex(v, c.group.inv(x));
    if (!l.vertex[below]) throw InternalError("pair vertex leaves L");
    return "(" + g.vertex_name(below) + "," + g.vertex_name(v) + ")";
  };
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (!lp.vertex[v]) continue;
    for (std::size_t x = 0; x < c.order(); ++x)
      if (fam.u[v] >> x & 1) out.h.add_vertex(vname(v, x));
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (!lp.edge[e]) continue;
    for (std::size_t x = 0; x < c.order(); ++x) {
      if (!(ue[e] >> x & 1)) continue;
      const std::size_t below = c.translate_edge(e, c.group.inv(x));
      if (!l.edge[below]) throw InternalError("pair edge leaves L");
      out.h.add_edge("(" + g.edge_name(below) + "," + g.edge_name(e) + ")", vname(g.tail(e), x),
                     vname(g.head(e), x));
    }
  }
  out.minus_chi_h = -invariants(out.h).chi;
  out.chi_l_prime = invariants(out.l_prime).chi;
  return out;
}

CompartmentalizedSubspace straight_subspace(const RhoKernel& k, const VertexFamily& fam,
                                            const PrimeField& f) {
  CompartmentalizedSubspace u;
  for (std::size_t v = 0; v < k.vertex_value.size(); ++v) {
    const auto& t = k.gl.vertex[v];
    std::vector<std::size_t> s;
    for (auto x : t)
      if (fam.u[v] >> x & 1) s.push_back(x);
    if (s.size() != static_cast<std::size_t>(std::popcount(fam.u[v]))) {
      throw InputError("straight subspace family leaves gl");
    }
    const Subspace free = kernel(f, select_columns(k.m, s));
    Matrix coords(free.dim(), k.vertex_value[v].dim());
    for (std::size_t r = 0; r < free.dim(); ++r) {
      const auto c = k.vertex_value[v].coordinates(embed(free.basis().row(r), s, t));
      for (std::size_t i = 0; i < c.size(); ++i) coords(r, i) = c[i];
    }
    u.per_vertex.push_back(free.dim() ? Subspace::span(f, coords)
                                      : Subspace(f, k.vertex_value[v].dim()));
  }
  return u;
}

ShncReport shnc_verify(const Bigraph& k, const Bigraph& l) {
  if (!is_etale(GraphMorphism::colouring(k))) throw InputError("K is not etale over B_2");
  if (!is_etale(GraphMorphism::colouring(l))) throw InputError("L is not etale over B_2");
  ShncReport r;
  r.rho_k = invariants(k.graph).rho;
  r.rho_l = invariants(l.graph).rho;
  r.product = fibre_product_over_b2(k, l);
  const auto inv = invariants(r.product.graph);
  r.rho_product = inv.rho;
  r.rho_prime_product = inv.rho_prime;
  const auto bound = static_cast<std::int64_t>(r.rho_k * r.rho_l);
  r.shnc_margin = bound - static_cast<std::int64_t>(r.rho_product);
  r.hnc_margin = bound - static_cast<std::int64_t>(r.rho_prime_product);
  return r;
}

std::vector<std::string> parse_words(const std::string& comma_separated) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(cur);
    cur.clear();
  };
  for (char ch : comma_separated) {
    if (ch == ',') {
      flush();
    } else if (ch != ' ' && ch != '\t') {
      cur.push_back(ch);
    }
  }
  flush();
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // The smaller index stays the representative.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a > b) std::swap(a, b);
    parent[b] = a;
  }
};

struct FoldEdge {
  std::size_t tail, head;
  int colour;
  auto key() const { return std::tie(tail, head, colour); }
  bool operator<(const FoldEdge& o) const { return key() < o.key(); }
  bool operator==(const FoldEdge& o) const { return key() == o.key(); }
};

}  // namespace

Bigraph stallings_core(const std::vector<std::string>& words) {
  if (words.empty()) throw InputError("stallings: no words given");
  std::vector<FoldEdge> edges;
  std::size_t vertices = 1;
  for (const auto& w : words) {
    if (w.empty()) throw InputError("stallings: empty word");
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::string("aAbB").find(w[i]) == std::string::npos) {
        throw InputError(std::string("stallings: letter '") + w[i] + "' is not one of a, A, b, B");
      }
      if (i > 0 && w[i] != w[i - 1] && std::tolower(w[i]) == std::tolower(w[i - 1])) {
        throw InputError("stallings: word '" + w + "' is not reduced");
      }
    }
    std::size_t at = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t next = i + 1 == w.size() ? 0 : vertices++;
      const int colour = std::tolower(w[i]) == 'a' ? 1 : 2;
      if (std::islower(w[i])) {
        edges.push_back({at, next, colour});
      } else {
        edges.push_back({next, at, colour});
      }
      at = next;
    }
  }

  UnionFind uf(vertices);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& e : edges) {
      e.tail = uf.find(e.tail);
      e.head = uf.find(e.head);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (std::size_t i = 0; i < edges.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < edges.size() && !changed; ++j) {
        if (edges[i].colour != edges[j].colour) continue;
        if (edges[i].tail == edges[j].tail) {
          uf.unite(edges[i].head, edges[j].head);
          changed = true;
        } else if (edges[i].head == edges[j].head) {
          uf.unite(edges[i].tail, edges[j].tail);
          changed = true;
        }
      }
  }

  // Prune hanging trees, keeping the basepoint.
  std::set<std::size_t> alive;
  for (std::size_t v = 0; v < vertices; ++v) alive.insert(uf.find(v));
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = alive.begin(); it != alive.end();) {
      const std::size_t v = *it;
      std::size_t degree = 0;
      for (const auto& e : edges) degree += (e.tail == v) + (e.head == v);
      if (v != 0 && degree <= 1) {
        edges.erase(std::remove_if(edges.begin(), edges.end(),
                                   [v](const FoldEdge& e) { return e.tail == v || e.head == v; }),
                    edges.end());
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }

  std::vector<std::size_t> index(vertices, SIZE_MAX);
  Bigraph out;
  for (auto v : alive) {
    index[v] = out.graph.num_vertices();
    out.graph.add_vertex("v" + std::to_string(index[v]));
  }
  for (auto& e : edges) {
    e.tail = index[e.tail];
    e.head = index[e.head];
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& e : edges) {
    out.graph.add_edge("e" + std::to_string(out.graph.num_edges()), e.tail, e.head);
    out.colour.push_back(e.colour);
  }
  return out;
}

std::optional<std::size_t> rho_decreasing_edge(const Digraph& g) {
  const std::size_t r = invariants(g).rho;
  if (r == 0) return std::nullopt;
  std::vector<bool> kv(g.num_vertices(), true), ke(g.num_edges(), true);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    ke[e] = false;
    if (invariants(subgraph(g, kv, ke)).rho + 1 == r) return e;
    ke[e] = true;
  }
  throw InternalError("no edge lowers rho although rho > 0");
}

GenericReport generic_excess_experiment(const CayleyContext& c, const SubgraphMask& l,
                                        std::size_t k, const PrimeField& f,
                                        const GenericOptions& opt) {
  GenericReport r;
  r.k = k;
  r.trials = opt.trials;
  std::set<std::string> methods;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Rng rng(derive_seed(opt.seed, t));
    std::optional<Matrix> m;
    for (std::size_t a = 0; a < opt.matrix_attempts && !m; ++a) {
      Matrix cand = random_matrix(f, k, c.order(), rng);
      if (is_totally_independent(f, cand)) m = std::move(cand);
    }
    if (!m) {
      ++r.skipped;
      continue;
    }
    try {
      const RhoKernel kern = build_kernel(c, l, k, *m, f);
      MaxExcessOptions mo;
      mo.budget = opt.budget;
      mo.seed = derive_seed(opt.seed, t);
      const MaxExcessResult me = max_excess(kern.sheaf, mo);
      if (!me.exact) {
        ++r.skipped;
        continue;
      }
      ++r.certified;
      ++r.histogram[me.value];
      methods.insert(to_string(me.method));
      if (me.value % c.order() != 0) r.all_divisible = false;
    } catch (const BudgetError&) {
      ++r.skipped;
    } catch (const InputError&) {
      ++r.skipped;
    }
  }
  std::size_t best = 0;
  for (const auto& [value, count] : r.histogram)
    if (count > best) {
      best = count;
      r.modal = value;
    }
  for (const auto& m : methods) r.method += (r.method.empty() ? "" : "+") + m;
  if (r.method.empty()) r.method = "none";
  return r;
}

bool modal_chain_ok(const std::vector<GenericReport>& by_k) {
  for (std::size_t i = 1; i < by_k.size(); ++i) {
    const auto& a = by_k[i - 1].modal;
    const auto& b = by_k[i].modal;
    if (!a || !b) continue;
    if (*b > *a) return false;
    if (*a > 0 && *b == *a) return false;
  }
  return true;
}

}  // namespace sheaflab
