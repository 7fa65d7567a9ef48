#include "sheaflab/excess.hpp"

#include <algorithm>
#include <limits>

#include "sheaflab/error.hpp"
#include "sheaflab/util.hpp"

namespace sheaflab {

CompartmentalizedSubspace zero_subspace(const Sheaf& s) {
  CompartmentalizedSubspace u;
  for (auto d : s.vdims()) u.per_vertex.emplace_back(s.field(), d);
  return u;
}

CompartmentalizedSubspace full_subspace(const Sheaf& s) {
  CompartmentalizedSubspace u;
  for (auto d : s.vdims()) u.per_vertex.push_back(Subspace::full(s.field(), d));
  return u;
}

CompartmentalizedSubspace intersect(const CompartmentalizedSubspace& a,
                                    const CompartmentalizedSubspace& b) {
  CompartmentalizedSubspace u;
  for (std::size_t v = 0; v < a.per_vertex.size(); ++v)
    u.per_vertex.push_back(subspace_intersection(a.per_vertex[v], b.per_vertex[v]));
  return u;
}

CompartmentalizedSubspace sum(const CompartmentalizedSubspace& a,
                              const CompartmentalizedSubspace& b) {
  CompartmentalizedSubspace u;
  for (std::size_t v = 0; v < a.per_vertex.size(); ++v)
    u.per_vertex.push_back(subspace_sum(a.per_vertex[v], b.per_vertex[v]));
  return u;
}

CompartmentalizedSubspace random_compartmentalized(const Sheaf& s, Rng& rng) {
  CompartmentalizedSubspace u;
  for (auto d : s.vdims()) u.per_vertex.push_back(random_subspace(s.field(), d, rng));
  return u;
}

std::int64_t DimensionProfile::chi() const {
  std::int64_t c = 0;
  for (auto x : vertex) c += static_cast<std::int64_t>(x);
  for (auto x : edge) c -= static_cast<std::int64_t>(x);
  return c;
}

std::size_t DimensionProfile::total() const {
  std::size_t t = 0;
  for (auto x : vertex) t += x;
  for (auto x : edge) t += x;
  return t;
}

namespace {

// Edge vectors whose images avoid the quotients at both ends.
Matrix gamma_system(const Sheaf& s, std::size_t e, const Matrix& q_head, const Matrix& q_tail) {
  const PrimeField& f = s.field();
  return vstack(multiply(f, q_head, s.head(e)), multiply(f, q_tail, s.tail(e)));
}

std::size_t gamma_dim(const Sheaf& s, std::size_t e, const Matrix& q_head, const Matrix& q_tail) {
  return s.edim(e) - rank(s.field(), gamma_system(s, e, q_head, q_tail));
}

void check_shape(const Sheaf& s, const CompartmentalizedSubspace& u) {
  if (u.per_vertex.size() != s.base().num_vertices())
    throw InputError("subspace family needs one subspace per vertex");
  for (std::size_t v = 0; v < u.per_vertex.size(); ++v) {
    if (u.per_vertex[v].ambient_dim() != s.vdim(v) || !(u.per_vertex[v].field() == s.field())) {
      throw InputError("subspace at vertex " + s.base().vertex_name(v) +
                       " does not live in the vertex value");
    }
  }
}

}  // namespace

ExcessResult gamma_excess(const Sheaf& s, const CompartmentalizedSubspace& u) {
  check_shape(s, u);
  const Digraph& g = s.base();
  ExcessResult r;
  std::vector<Matrix> q;
  for (const auto& sub : u.per_vertex) {
    q.push_back(sub.quotient_map());
    r.profile.vertex.push_back(sub.dim());
    r.excess -= static_cast<std::int64_t>(sub.dim());
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    r.gamma.push_back(kernel(s.field(), gamma_system(s, e, q[g.head(e)], q[g.tail(e)])));
    r.profile.edge.push_back(r.gamma.back().dim());
    r.excess += static_cast<std::int64_t>(r.gamma.back().dim());
  }
  return r;
}

const char* to_string(ExcessMethod m) {
  switch (m) {
    case ExcessMethod::Brute: return "brute";
    case ExcessMethod::EdgeSimple: return "edge-simple";
    case ExcessMethod::Pullback: return "pullback";
    case ExcessMethod::Auto: return "auto";
  }
  return "?";
}

ExcessMethod parse_excess_method(const std::string& name) {
  if (name == "brute") return ExcessMethod::Brute;
  if (name == "edge-simple" || name == "edge_simple") return ExcessMethod::EdgeSimple;
  if (name == "pullback") return ExcessMethod::Pullback;
  if (name == "auto") return ExcessMethod::Auto;
  throw InputError("unknown max-excess method '" + name + "'");
}

std::uint64_t count_compartmentalized(const Sheaf& s) {
  std::uint64_t total = 1;
  for (auto d : s.vdims()) {
    const std::uint64_t c = count_subspaces(s.field().modulus(), d);
    if (c != 0 && total > UINT64_MAX / c) return UINT64_MAX;
    total *= c;
  }
  return total;
}

namespace {

// Per-vertex subspace lists, with the enumeration index of a tuple read as a
// mixed-radix number whose most significant digit is vertex 0. Increasing
// index is therefore lexicographic order on tuples.
struct TupleSpace {
  std::vector<std::vector<Subspace>> lists;
  std::vector<std::uint64_t> stride;
  std::uint64_t total = 1;

  TupleSpace(const Sheaf& s, std::uint64_t budget) {
    if (s.field().modulus() > 3) {
      throw InputError("enumeration needs GF(2) or GF(3), got GF(" +
                       std::to_string(s.field().modulus()) + ")");
    }
    const std::uint64_t count = count_compartmentalized(s);
    if (count > budget) {
      throw BudgetError("enumeration needs " +
                        (count == UINT64_MAX ? std::string("too many") : std::to_string(count)) +
                        " subspace tuples; budget is " + std::to_string(budget));
    }
    const std::size_t n = s.base().num_vertices();
    lists.resize(n);
    stride.assign(n, 1);
    for (std::size_t v = 0; v < n; ++v) lists[v] = all_subspaces(s.field(), s.vdim(v));
    for (std::size_t v = n; v-- > 0;) {
      stride[v] = total;
      total *= lists[v].size();
    }
  }

  std::size_t digit(std::uint64_t index, std::size_t v) const {
    return static_cast<std::size_t>(index / stride[v] % lists[v].size());
  }

  CompartmentalizedSubspace at(std::uint64_t index) const {
    CompartmentalizedSubspace u;
    for (std::size_t v = 0; v < lists.size(); ++v) u.per_vertex.push_back(lists[v][digit(index, v)]);
    return u;
  }
};

// Per edge, a table over (subspace at head, subspace at tail) of some value
// depending only on that pair. Self-loops only fill the diagonal.
template <typename Fn>
std::vector<std::vector<std::size_t>> pair_tables(const Sheaf& s, const TupleSpace& ts, Fn&& value) {
  const Digraph& g = s.base();
  std::vector<std::vector<std::size_t>> tables(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::size_t h = g.head(e), t = g.tail(e);
    const std::size_t nh = ts.lists[h].size(), nt = ts.lists[t].size();
    tables[e].assign(nh * nt, 0);
    parallel_chunks(nh, thread_budget(), [&](std::size_t begin, std::size_t end, std::size_t) {
      for (std::size_t i = begin; i < end; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
          if (h == t && i != j) continue;
          tables[e][i * nt + j] = value(e, ts.lists[h][i], ts.lists[t][j]);
        }
    });
  }
  return tables;
}

struct TupleMax {
  std::int64_t value = std::numeric_limits<std::int64_t>::min();
  std::uint64_t index = 0;
  std::vector<std::uint64_t> ties;
};

// Maximizes sum_e table_e(pair) - dim U over all tuples, deterministically.
TupleMax maximize_tuples(const Sheaf& s, const TupleSpace& ts,
                         const std::vector<std::vector<std::size_t>>& tables,
                         std::size_t keep_ties) {
  const Digraph& g = s.base();
  const std::size_t chunks = thread_budget();
  std::vector<TupleMax> part(chunks);
  parallel_chunks(ts.total, chunks, [&](std::size_t begin, std::size_t end, std::size_t c) {
    TupleMax& best = part[c];
    std::vector<std::size_t> d(ts.lists.size());
    for (std::uint64_t i = begin; i < end; ++i) {
      std::int64_t val = 0;
      for (std::size_t v = 0; v < d.size(); ++v) {
        d[v] = ts.digit(i, v);
        val -= static_cast<std::int64_t>(ts.lists[v][d[v]].dim());
      }
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const std::size_t nt = ts.lists[g.tail(e)].size();
        val += static_cast<std::int64_t>(tables[e][d[g.head(e)] * nt + d[g.tail(e)]]);
      }
      if (val > best.value) {
        best.value = val;
        best.index = i;
        best.ties.clear();
      }
      if (val == best.value && best.ties.size() < keep_ties) best.ties.push_back(i);
    }
  });
  TupleMax out;
  for (auto& p : part) {
    if (p.value > out.value) {
      out = p;
    } else if (p.value == out.value) {
      for (auto i : p.ties)
        if (out.ties.size() < keep_ties) out.ties.push_back(i);
    }
  }
  return out;
}

MaxExcessResult brute(const Sheaf& s, const MaxExcessOptions& opt) {
  TupleSpace ts(s, opt.budget);
  auto tables = pair_tables(s, ts, [&](std::size_t e, const Subspace& uh, const Subspace& ut) {
    return gamma_dim(s, e, uh.quotient_map(), ut.quotient_map());
  });
  const TupleMax best = maximize_tuples(s, ts, tables, opt.collect_maximizers);
  MaxExcessResult r;
  r.method = ExcessMethod::Brute;
  r.value = static_cast<std::size_t>(best.value);  // U = 0 gives 0
  r.enumerated = ts.total;
  r.witness = ts.at(best.index);
  for (auto i : best.ties) r.maximizers.push_back(ts.at(i));
  return r;
}

bool edge_simple(const Sheaf& s) {
  for (auto d : s.edims())
    if (d > 1) return false;
  return true;
}

// Exact grid when affordable, otherwise random specialization over a large
// enough field.
TwistedBetti certified_twisted(const Sheaf& s, const MaxExcessOptions& opt) {
  try {
    return twisted_betti_exhaustive(s, opt.budget);
  } catch (const BudgetError&) {
    const std::uint64_t deg = std::min(s.total_edim(), s.total_vdim());
    if (s.field().modulus() <= kTwistSafetyFactor * deg) throw;
    return twisted_betti(s, opt.samples, opt.seed);
  }
}

MaxExcessResult by_edge_simple(const Sheaf& s, const MaxExcessOptions& opt) {
  if (!edge_simple(s)) throw InputError("edge-simple method needs every edge dimension <= 1");
  MaxExcessResult r;
  r.method = ExcessMethod::EdgeSimple;
  r.twisted = certified_twisted(s, opt);
  r.value = r.twisted->h1t;
  r.exact = r.twisted->exact;
  r.enumerated = r.twisted->samples;
  return r;
}

MaxExcessResult by_pullback(const Sheaf& s, const MaxExcessOptions& opt) {
  const std::size_t bound = 2 * (s.total_vdim() + s.total_edim()) + 1;
  CoverSearchResult found = high_abelian_girth_cover(s.base(), bound, opt.cover);
  if (!found.cover) {
    throw BudgetError("no cover of Abelian girth >= " + std::to_string(bound) + " up to degree " +
                      std::to_string(opt.cover.max_degree) + " (" + std::to_string(found.tried) +
                      " tried, best girth " + std::to_string(found.best_girth) + ")");
  }
  const Sheaf up = pullback(*found.cover, s);
  MaxExcessResult r;
  r.method = ExcessMethod::Pullback;
  r.twisted = certified_twisted(up, opt);
  r.exact = r.twisted->exact;
  r.enumerated = found.tried;
  r.cover_degree = found.degree;
  r.girth_bound = bound;
  if (r.twisted->h1t % found.degree != 0) {
    throw InternalError("twisted h1 " + std::to_string(r.twisted->h1t) +
                        " of the pullback is not divisible by the degree " +
                        std::to_string(found.degree));
  }
  r.value = r.twisted->h1t / found.degree;
  r.cover = std::move(found.cover);
  return r;
}

}  // namespace

MaxExcessResult max_excess(const Sheaf& s, const MaxExcessOptions& opt) {
  switch (opt.method) {
    case ExcessMethod::Brute: return brute(s, opt);
    case ExcessMethod::EdgeSimple: return by_edge_simple(s, opt);
    case ExcessMethod::Pullback: return by_pullback(s, opt);
    case ExcessMethod::Auto: break;
  }
  if (edge_simple(s)) {
    try {
      return by_edge_simple(s, opt);
    } catch (const BudgetError&) {
    }
  }
  if (s.field().modulus() <= 3 && count_compartmentalized(s) <= opt.budget) return brute(s, opt);
  return by_pullback(s, opt);
}

CoverSearchResult high_abelian_girth_cover(const Digraph& g, std::size_t bound,
                                           const CoverSearchOptions& opt) {
  CoverSearchResult r;
  auto consider = [&](const Digraph& candidate) {
    ++r.tried;
    const auto ag = abelian_girth(candidate, bound);
    const std::size_t value = ag ? *ag : bound;
    r.best_girth = std::max(r.best_girth, value);
    return !ag || *ag >= bound;
  };
  if (consider(g)) {
    r.cover = GraphMorphism::identity(g);
    r.degree = 1;
    return r;
  }
  for (std::size_t d = 2; d <= opt.max_degree; ++d) {
    for (std::size_t a = 0; a < opt.attempts_per_degree; ++a) {
      GraphMorphism c = random_permutation_cover(g, d, derive_seed(opt.seed, d * 1000003 + a));
      if (consider(c.source())) {
        r.cover = std::move(c);
        r.degree = d;
        return r;
      }
    }
  }
  return r;
}

SubsheafOracleResult max_excess_subsheaf_oracle(const Sheaf& s, std::uint64_t budget) {
  TupleSpace ts(s, budget);
  const PrimeField& f = s.field();
  const Digraph& g = s.base();
  std::vector<std::vector<Subspace>> edge_lists;
  for (std::size_t e = 0; e < g.num_edges(); ++e) edge_lists.push_back(all_subspaces(f, s.edim(e)));

  auto closed = [&](std::size_t e, const Subspace& w, const Subspace& uh, const Subspace& ut) {
    const Matrix hw = transpose(multiply(f, s.head(e), w.inclusion()));
    const Matrix tw = transpose(multiply(f, s.tail(e), w.inclusion()));
    for (std::size_t r = 0; r < hw.rows(); ++r)
      if (!uh.contains(hw.row(r)) || !ut.contains(tw.row(r))) return false;
    return true;
  };
  // Largest closed edge subspace, by position in the edge list.
  auto best_edge = [&](std::size_t e, const Subspace& uh, const Subspace& ut) {
    std::size_t pos = 0;
    for (std::size_t k = 0; k < edge_lists[e].size(); ++k)
      if (closed(e, edge_lists[e][k], uh, ut) && edge_lists[e][k].dim() >= edge_lists[e][pos].dim())
        pos = k;
    return pos;
  };
  auto pos_tables = pair_tables(s, ts, best_edge);
  std::vector<std::vector<std::size_t>> dim_tables = pos_tables;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (auto& x : dim_tables[e]) x = edge_lists[e][x].dim();

  const TupleMax best = maximize_tuples(s, ts, dim_tables, 0);
  PointSubspaces sub;
  sub.vertex = ts.at(best.index).per_vertex;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::size_t i = ts.digit(best.index, g.head(e));
    const std::size_t j = ts.digit(best.index, g.tail(e));
    sub.edge.push_back(edge_lists[e][pos_tables[e][i * ts.lists[g.tail(e)].size() + j]]);
  }
  SubsheafOracleResult r;
  r.witness = subsheaf(s, sub);
  const std::int64_t minus_chi = -r.witness->source.chi();
  if (minus_chi != best.value) throw InternalError("subsheaf witness disagrees with its table");
  r.value = static_cast<std::size_t>(minus_chi);
  return r;
}

}  // namespace sheaflab
