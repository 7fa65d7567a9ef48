#include "sheaflab/galois.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "sheaflab/error.hpp"
#include "sheaflab/util.hpp"

namespace sheaflab {

namespace {

// Associativity by Light's test: an element a with (x a) y = x (a y) for all
// x, y is closed under products, so checking a generating set suffices.
bool associative(const std::vector<std::vector<std::size_t>>& t) {
  const std::size_t n = t.size();
  std::vector<bool> reached(n, false);
  std::vector<std::size_t> gens;
  std::vector<std::size_t> frontier;
  for (std::size_t cand = 0; cand < n; ++cand) {
    if (reached[cand]) continue;
    gens.push_back(cand);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (t[t[x][cand]][y] != t[x][t[cand][y]]) return false;
    // Close the reached set under right multiplication by the generators.
    reached[cand] = true;
    frontier.assign(1, cand);
    for (std::size_t i = 0; i < n; ++i)
      if (reached[i] && i != cand) frontier.push_back(i);
    while (!frontier.empty()) {
      const std::size_t r = frontier.back();
      frontier.pop_back();
      for (auto g : gens) {
        for (std::size_t p : {t[r][g], t[g][r]}) {
          if (!reached[p]) {
            reached[p] = true;
            frontier.push_back(p);
          }
        }
      }
    }
  }
  return true;
}

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::string> names,
                         std::vector<std::vector<std::size_t>> table)
    : names_(std::move(names)), table_(std::move(table)) {
  const std::size_t n = names_.size();
  if (n == 0) throw InputError("a group needs at least one element");
  if (n > kMaxGroupOrder) {
    throw InputError("group order " + std::to_string(n) + " exceeds " +
                     std::to_string(kMaxGroupOrder));
  }
  {
    std::vector<std::string> sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InputError("duplicate group element name");
    }
  }
  if (table_.size() != n) throw InputError("multiplication table has the wrong size");
  for (const auto& row : table_) {
    if (row.size() != n) throw InputError("multiplication table has the wrong size");
    for (auto x : row)
      if (x >= n) throw InputError("multiplication table entry out of range");
  }
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) throw InputError("multiplication table has no identity");
  inverse_.assign(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (table_[a][b] == identity_ && table_[b][a] == identity_) {
        inverse_[a] = b;
        break;
      }
    }
    if (inverse_[a] == n) throw InputError("element '" + names_[a] + "' has no inverse");
  }
  if (!associative(table_)) throw InputError("multiplication table is not associative");
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw InputError("cyclic group order must be positive");
  if (n > kMaxGroupOrder) throw InputError("cyclic group order too large");
  std::vector<std::string> names(n);
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    names[a] = std::to_string(a);
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return FiniteGroup(std::move(names), std::move(t));
}

FiniteGroup FiniteGroup::symmetric(std::size_t n) {
  if (n == 0 || n > 6) throw InputError("symmetric groups are supported for 1 <= n <= 6");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    index.emplace(perms[i], i);
    std::string s;
    for (auto x : perms[i]) s += static_cast<char>('0' + x);
    names.push_back(s);
  }
  // (s t)(i) = s(t(i)).
  std::vector<std::vector<std::size_t>> t(perms.size(), std::vector<std::size_t>(perms.size()));
  std::vector<std::size_t> c(n);
  for (std::size_t a = 0; a < perms.size(); ++a)
    for (std::size_t b = 0; b < perms.size(); ++b) {
      for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = index.at(c);
    }
  return FiniteGroup(std::move(names), std::move(t));
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.order(), nb = b.order();
  if (na * nb > kMaxGroupOrder) throw InputError("direct product is too large");
  std::vector<std::string> names;
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) names.push_back("(" + a.name(x) + "," + b.name(y) + ")");
  std::vector<std::vector<std::size_t>> t(na * nb, std::vector<std::size_t>(na * nb));
  for (std::size_t i = 0; i < na * nb; ++i)
    for (std::size_t j = 0; j < na * nb; ++j)
      t[i][j] = a.mul(i / nb, j / nb) * nb + b.mul(i % nb, j % nb);
  return FiniteGroup(std::move(names), std::move(t));
}

std::size_t FiniteGroup::element(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw InputError("unknown group element '" + name + "'");
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t a = 0; a < order(); ++a)
    for (std::size_t b = a + 1; b < order(); ++b)
      if (table_[a][b] != table_[b][a]) return false;
  return true;
}

std::size_t FiniteGroup::element_order(std::size_t a) const {
  std::size_t k = 1;
  for (std::size_t x = a; x != identity_; x = mul(x, a)) ++k;
  return k;
}

std::vector<std::size_t> FiniteGroup::generated_subgroup(
    const std::vector<std::size_t>& gens) const {
  std::vector<bool> in(order(), false);
  std::vector<std::size_t> stack{identity_};
  in[identity_] = true;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (auto g : gens) {
      const std::size_t y = mul(g, x);
      if (!in[y]) {
        in[y] = true;
        stack.push_back(y);
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < order(); ++i)
    if (in[i]) out.push_back(i);
  return out;
}

FiniteGroup group_from_spec(const std::string& spec) {
  auto count = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(s, &used);
      if (used != s.size()) throw InputError("");
      return static_cast<std::size_t>(v);
    } catch (...) {
      throw InputError("bad group order in '" + spec + "'");
    }
  };
  if (spec.rfind("cyclic:", 0) == 0) return FiniteGroup::cyclic(count(spec.substr(7)));
  if (spec.rfind("symmetric:", 0) == 0) return FiniteGroup::symmetric(count(spec.substr(10)));
  if (spec.rfind("product:", 0) == 0) {
    const std::string rest = spec.substr(8);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw InputError("product group needs two factors");
    return FiniteGroup::product(group_from_spec(rest.substr(0, comma)),
                                group_from_spec(rest.substr(comma + 1)));
  }
  throw InputError("unknown group spec '" + spec + "'");
}

FiniteGroup group_from_table_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (names.empty()) {
      if (tok[0] != "elements" || tok.size() < 2) {
        throw InputError("line " + std::to_string(lineno) + ": expected 'elements ...'");
      }
      names.assign(tok.begin() + 1, tok.end());
      continue;
    }
    if (tok.size() != names.size() + 1) {
      throw InputError("line " + std::to_string(lineno) + ": row has the wrong length");
    }
    rows.push_back(std::move(tok));
  }
  if (names.empty()) throw InputError("group table is empty");
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < names.size(); ++i) idx.emplace(names[i], i);
  auto lookup = [&](const std::string& s) {
    auto it = idx.find(s);
    if (it == idx.end()) throw InputError("unknown group element '" + s + "' in table");
    return it->second;
  };
  std::vector<std::vector<std::size_t>> t(names.size());
  std::vector<bool> seen(names.size(), false);
  for (const auto& r : rows) {
    const std::size_t a = lookup(r[0]);
    if (seen[a]) throw InputError("duplicate table row for '" + r[0] + "'");
    seen[a] = true;
    for (std::size_t j = 1; j < r.size(); ++j) t[a].push_back(lookup(r[j]));
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw InputError("group table is missing rows");
  }
  return FiniteGroup(std::move(names), std::move(t));
}

GaloisCoordinates random_coordinates(const Digraph& base, const FiniteGroup& group,
                                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> a(base.num_edges());
  for (auto& x : a) x = uniform_below(rng, group.order());
  return {base, group, std::move(a)};
}

std::string galois_violation(const GaloisCover& c) {
  const Digraph& k = c.total;
  const GraphMorphism& p = c.projection;
  const FiniteGroup& grp = c.group;
  const std::size_t n = grp.order();
  if (!is_covering(p)) return "projection is not a covering";
  if (c.vertex_action.size() != n || c.edge_action.size() != n) return "action is incomplete";
  for (std::size_t g = 0; g < n; ++g) {
    const auto& va = c.vertex_action[g];
    const auto& ea = c.edge_action[g];
    if (va.size() != k.num_vertices() || ea.size() != k.num_edges()) return "action is incomplete";
    for (std::size_t v = 0; v < va.size(); ++v)
      if (va[v] >= k.num_vertices() || p.vmap(va[v]) != p.vmap(v))
        return "element " + grp.name(g) + " does not preserve vertex fibres";
    for (std::size_t e = 0; e < ea.size(); ++e) {
      if (ea[e] >= k.num_edges() || p.emap(ea[e]) != p.emap(e))
        return "element " + grp.name(g) + " does not preserve edge fibres";
      if (k.tail(ea[e]) != va[k.tail(e)] || k.head(ea[e]) != va[k.head(e)])
        return "element " + grp.name(g) + " is not a graph automorphism";
    }
  }
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const auto& gh = c.vertex_action[grp.mul(g, h)];
      const auto& egh = c.edge_action[grp.mul(g, h)];
      for (std::size_t v = 0; v < k.num_vertices(); ++v)
        if (c.vertex_action[h][c.vertex_action[g][v]] != gh[v]) return "not a right action";
      for (std::size_t e = 0; e < k.num_edges(); ++e)
        if (c.edge_action[h][c.edge_action[g][e]] != egh[e]) return "not a right action";
    }
  auto transitive = [&](const std::vector<std::vector<std::size_t>>& fibres,
                        const std::vector<std::vector<std::size_t>>& act) {
    for (const auto& f : fibres) {
      if (f.size() != n) return false;
      if (f.empty()) continue;
      std::vector<std::size_t> orbit;
      for (std::size_t g = 0; g < n; ++g) orbit.push_back(act[g][f[0]]);
      std::sort(orbit.begin(), orbit.end());
      if (orbit != f) return false;
    }
    return true;
  };
  if (!transitive(p.vertex_fibres(), c.vertex_action))
    return "action is not simply transitive on a vertex fibre";
  if (!transitive(p.edge_fibres(), c.edge_action))
    return "action is not simply transitive on an edge fibre";
  return {};
}

GaloisCover cover_from_coordinates(const GaloisCoordinates& c) {
  const Digraph& b = c.base;
  const FiniteGroup& grp = c.group;
  const std::size_t n = grp.order();
  if (c.a.size() != b.num_edges()) throw InputError("coordinates do not cover every edge");
  for (auto x : c.a)
    if (x >= n) throw InputError("coordinate is not a group element");
  Digraph k;
  std::vector<std::size_t> vmap, emap;
  for (std::size_t v = 0; v < b.num_vertices(); ++v)
    for (std::size_t a = 0; a < n; ++a) {
      k.add_vertex("(" + b.vertex_name(v) + "," + grp.name(a) + ")");
      vmap.push_back(v);
    }
  for (std::size_t e = 0; e < b.num_edges(); ++e)
    for (std::size_t a = 0; a < n; ++a) {
      k.add_edge("(" + b.edge_name(e) + "," + grp.name(a) + ")", b.tail(e) * n + a,
                 b.head(e) * n + grp.mul(c.a[e], a));
      emap.push_back(e);
    }
  std::vector<std::vector<std::size_t>> va(n), ea(n);
  for (std::size_t g = 0; g < n; ++g) {
    va[g].resize(k.num_vertices());
    ea[g].resize(k.num_edges());
    for (std::size_t i = 0; i < va[g].size(); ++i) va[g][i] = (i / n) * n + grp.mul(i % n, g);
    for (std::size_t i = 0; i < ea[g].size(); ++i) ea[g][i] = (i / n) * n + grp.mul(i % n, g);
  }
  GraphMorphism proj(k, b, std::move(vmap), std::move(emap));
  return {std::move(k), std::move(proj), grp, std::move(va), std::move(ea)};
}

GaloisCoordinates coordinates_from_cover(const GaloisCover& c) {
  if (auto why = galois_violation(c); !why.empty()) throw InputError("not a Galois cover: " + why);
  const Digraph& b = c.projection.target();
  const Digraph& k = c.total;
  const std::size_t n = c.group.order();
  const auto vf = c.projection.vertex_fibres();
  const auto ef = c.projection.edge_fibres();
  // position[x] = g with origin(fibre of x) . g = x
  std::vector<std::size_t> position(k.num_vertices());
  for (const auto& f : vf)
    for (std::size_t g = 0; g < n; ++g) position[c.vertex_action[g][f[0]]] = g;
  std::vector<std::size_t> a(b.num_edges());
  for (std::size_t e = 0; e < b.num_edges(); ++e) {
    const std::size_t origin = vf[b.tail(e)][0];
    for (auto lift : ef[e])
      if (k.tail(lift) == origin) a[e] = position[k.head(lift)];
  }
  return {b, c.group, std::move(a)};
}

Bigraph cayley_bigraph(const FiniteGroup& group, std::size_t g1, std::size_t g2) {
  const std::size_t n = group.order();
  if (g1 >= n || g2 >= n) throw InputError("Cayley generator is not a group element");
  Digraph g;
  for (std::size_t x = 0; x < n; ++x) g.add_vertex(group.name(x));
  std::vector<int> colour;
  for (int i = 1; i <= 2; ++i) {
    const std::size_t gi = i == 1 ? g1 : g2;
    for (std::size_t x = 0; x < n; ++x) {
      g.add_edge("(" + group.name(x) + "," + std::to_string(i) + ")", x, group.mul(gi, x));
      colour.push_back(i);
    }
  }
  return {std::move(g), std::move(colour)};
}

GaloisCover cayley_cover(const FiniteGroup& group, std::size_t g1, std::size_t g2) {
  Bigraph b = cayley_bigraph(group, g1, g2);
  const std::size_t n = group.order();
  std::vector<std::vector<std::size_t>> va(n, std::vector<std::size_t>(n)),
      ea(n, std::vector<std::size_t>(2 * n));
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t x = 0; x < n; ++x) {
      va[h][x] = group.mul(x, h);
      ea[h][x] = group.mul(x, h);
      ea[h][n + x] = n + group.mul(x, h);
    }
  GraphMorphism proj = GraphMorphism::colouring(b);
  return {std::move(b.graph), std::move(proj), group, std::move(va), std::move(ea)};
}

std::size_t monodromy(const GaloisCoordinates& c, std::size_t basepoint,
                      const std::vector<WalkStep>& walk) {
  const Digraph& b = c.base;
  if (basepoint >= b.num_vertices()) throw InputError("monodromy basepoint is not a vertex");
  std::size_t at = basepoint;
  std::size_t result = c.group.identity();
  for (std::size_t i = 0; i < walk.size(); ++i) {
    const WalkStep& s = walk[i];
    if (s.edge >= b.num_edges()) throw InputError("walk step is not an edge");
    const std::size_t from = s.forward ? b.tail(s.edge) : b.head(s.edge);
    if (from != at) {
      throw InputError("walk step " + std::to_string(i) + " is not incident to the current vertex");
    }
    at = s.forward ? b.head(s.edge) : b.tail(s.edge);
    const std::size_t a = s.forward ? c.a[s.edge] : c.group.inv(c.a[s.edge]);
    result = c.group.mul(a, result);
  }
  if (at != basepoint) throw InputError("walk is not closed");
  return result;
}

namespace {

struct Forest {
  std::vector<std::size_t> root;      // root of each vertex's tree
  std::vector<std::size_t> product;   // monodromy of the tree path from the root
  std::vector<bool> tree_edge;
};

Forest spanning_forest(const GaloisCoordinates& c, const std::vector<std::size_t>& roots) {
  const Digraph& b = c.base;
  const FiniteGroup& grp = c.group;
  Forest f{std::vector<std::size_t>(b.num_vertices(), SIZE_MAX),
           std::vector<std::size_t>(b.num_vertices(), grp.identity()),
           std::vector<bool>(b.num_edges(), false)};
  for (auto r : roots) {
    if (f.root[r] != SIZE_MAX) continue;
    f.root[r] = r;
    std::deque<std::size_t> queue{r};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (auto e : b.out_edges(u)) {
        const std::size_t w = b.head(e);
        if (f.root[w] != SIZE_MAX) continue;
        f.root[w] = r;
        f.product[w] = grp.mul(c.a[e], f.product[u]);
        f.tree_edge[e] = true;
        queue.push_back(w);
      }
      for (auto e : b.in_edges(u)) {
        const std::size_t w = b.tail(e);
        if (f.root[w] != SIZE_MAX) continue;
        f.root[w] = r;
        f.product[w] = grp.mul(grp.inv(c.a[e]), f.product[u]);
        f.tree_edge[e] = true;
        queue.push_back(w);
      }
    }
  }
  return f;
}

}  // namespace

std::vector<std::size_t> monodromy_image(const GaloisCoordinates& c, std::size_t basepoint) {
  if (basepoint >= c.base.num_vertices()) throw InputError("monodromy basepoint is not a vertex");
  const Forest f = spanning_forest(c, {basepoint});
  const FiniteGroup& grp = c.group;
  std::vector<std::size_t> gens;
  for (std::size_t e = 0; e < c.base.num_edges(); ++e) {
    if (f.root[c.base.tail(e)] != basepoint || f.tree_edge[e]) continue;
    gens.push_back(grp.mul(grp.inv(f.product[c.base.head(e)]),
                           grp.mul(c.a[e], f.product[c.base.tail(e)])));
  }
  return grp.generated_subgroup(gens);
}

GaloisCoordinates change_origin(const GaloisCoordinates& c, const std::vector<std::size_t>& g) {
  if (g.size() != c.base.num_vertices()) throw InputError("origin change needs one element per vertex");
  GaloisCoordinates out = c;
  const FiniteGroup& grp = c.group;
  for (std::size_t e = 0; e < c.base.num_edges(); ++e) {
    out.a[e] = grp.mul(grp.inv(g[c.base.head(e)]), grp.mul(c.a[e], g[c.base.tail(e)]));
  }
  return out;
}

GaloisCoordinates normalize_on_spanning_tree(const GaloisCoordinates& c,
                                             std::vector<std::size_t>* origins) {
  std::vector<std::size_t> roots(c.base.num_vertices());
  std::iota(roots.begin(), roots.end(), 0);
  const Forest f = spanning_forest(c, roots);
  if (origins) *origins = f.product;
  return change_origin(c, f.product);
}

GaloisCover normal_extension(const GraphMorphism& pi) {
  const auto cls = classify_morphism(pi);
  if (cls.kind != MorphismKind::covering) throw InputError("normal extension needs a covering");
  if (connected_components(pi.source()).count != 1) {
    throw InputError("normal extension needs a connected cover");
  }
  if (!cls.degree) throw InputError("covering has no uniform degree");
  const std::size_t n = *cls.degree;
  const FiniteGroup sn = FiniteGroup::symmetric(n);
  const Digraph& b = pi.target();
  const Digraph& g = pi.source();
  const auto vf = pi.vertex_fibres();
  const auto ef = pi.edge_fibres();
  // An ordering x_i = F_v[s(i)] of the fibre over v is the vertex (v, s).
  // The lifts of e at the tails F_te[s(i)] end at F_he[p_e(s(i))], so the
  // ordering graph is the cover with coordinates a_e = p_e.
  GaloisCoordinates coords{b, sn, std::vector<std::size_t>(b.num_edges())};
  for (std::size_t e = 0; e < b.num_edges(); ++e) {
    const auto& tails = vf[b.tail(e)];
    const auto& heads = vf[b.head(e)];
    std::string word(n, '0');
    for (auto lift : ef[e]) {
      const auto i = std::find(tails.begin(), tails.end(), g.tail(lift)) - tails.begin();
      const auto j = std::find(heads.begin(), heads.end(), g.head(lift)) - heads.begin();
      word[static_cast<std::size_t>(i)] = static_cast<char>('0' + j);
    }
    coords.a[e] = sn.element(word);
  }
  return cover_from_coordinates(coords);
}

}  // namespace sheaflab
