#include "sheaflab/sheaf.hpp"

#include "sheaflab/error.hpp"

namespace sheaflab {

namespace {

std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

std::vector<std::size_t> offsets(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> off(dims.size() + 1, 0);
  for (std::size_t i = 0; i < dims.size(); ++i) off[i + 1] = off[i] + dims[i];
  return off;
}

void require_same_base(const Sheaf& a, const Sheaf& b, const char* what) {
  if (!(a.base() == b.base())) throw InputError(std::string(what) + ": sheaves live on different graphs");
  if (!(a.field() == b.field())) throw InputError(std::string(what) + ": sheaves use different fields");
}

}  // namespace

Sheaf::Sheaf(Digraph base, PrimeField field, std::vector<std::size_t> vdim,
             std::vector<std::size_t> edim, std::vector<Matrix> head, std::vector<Matrix> tail)
    : base_(std::move(base)),
      field_(field),
      vdim_(std::move(vdim)),
      edim_(std::move(edim)),
      head_(std::move(head)),
      tail_(std::move(tail)) {
  if (vdim_.size() != base_.num_vertices()) throw InputError("sheaf: one dimension per vertex required");
  if (edim_.size() != base_.num_edges() || head_.size() != base_.num_edges() ||
      tail_.size() != base_.num_edges()) {
    throw InputError("sheaf: one dimension and two restriction maps per edge required");
  }
  for (std::size_t e = 0; e < base_.num_edges(); ++e) {
    const std::size_t rh = vdim_[base_.head(e)], rt = vdim_[base_.tail(e)];
    if (head_[e].rows() != rh || head_[e].cols() != edim_[e]) {
      throw InputError("sheaf: head map of edge '" + base_.edge_name(e) + "' must be " +
                       shape(rh, edim_[e]) + ", got " + shape(head_[e].rows(), head_[e].cols()));
    }
    if (tail_[e].rows() != rt || tail_[e].cols() != edim_[e]) {
      throw InputError("sheaf: tail map of edge '" + base_.edge_name(e) + "' must be " +
                       shape(rt, edim_[e]) + ", got " + shape(tail_[e].rows(), tail_[e].cols()));
    }
    for (const Matrix* m : {&head_[e], &tail_[e]})
      for (auto x : m->data())
        if (x >= field_.modulus()) throw InputError("sheaf: matrix entry not reduced");
  }
  voff_ = offsets(vdim_);
  eoff_ = offsets(edim_);
}

Sheaf constant_sheaf(const Digraph& g, const PrimeField& f, std::size_t dim) {
  std::vector<Matrix> id(g.num_edges(), Matrix::identity(dim));
  return Sheaf(g, f, std::vector<std::size_t>(g.num_vertices(), dim),
               std::vector<std::size_t>(g.num_edges(), dim), id, id);
}

Sheaf structure_sheaf(const Digraph& g, const PrimeField& f) { return constant_sheaf(g, f, 1); }

Sheaf zero_sheaf(const Digraph& g, const PrimeField& f) { return constant_sheaf(g, f, 0); }

Sheaf unhappy_bundle(const PrimeField& f) {
  const Matrix h1(4, 2, {1, 0, 0, 1, 0, 0, 0, 0});
  const Matrix h2(4, 2, {1, 0, 0, 0, 0, 1, 0, 0});
  const Matrix t1(4, 2, {0, 0, 0, 0, 1, 0, 0, 1});
  const Matrix t2(4, 2, {0, 0, 1, 0, 0, 0, 0, 1});
  return Sheaf(bouquet(2), f, {4}, {2, 2}, {h1, h2}, {t1, t2});
}

Sheaf pullback(const GraphMorphism& f, const Sheaf& s) {
  if (!(f.target() == s.base())) throw InputError("pullback: sheaf is not on the morphism target");
  const Digraph& k = f.source();
  std::vector<std::size_t> vd(k.num_vertices()), ed(k.num_edges());
  std::vector<Matrix> h(k.num_edges()), t(k.num_edges());
  for (std::size_t v = 0; v < vd.size(); ++v) vd[v] = s.vdim(f.vmap(v));
  for (std::size_t e = 0; e < ed.size(); ++e) {
    ed[e] = s.edim(f.emap(e));
    h[e] = s.head(f.emap(e));
    t[e] = s.tail(f.emap(e));
  }
  return Sheaf(k, s.field(), std::move(vd), std::move(ed), std::move(h), std::move(t));
}

Sheaf pushforward_shriek(const GraphMorphism& f, const Sheaf& s) {
  if (!(f.source() == s.base())) throw InputError("pushforward: sheaf is not on the morphism source");
  const Digraph& k = f.source();
  const Digraph& g = f.target();
  const auto vf = f.vertex_fibres();
  const auto ef = f.edge_fibres();
  std::vector<std::size_t> vd(g.num_vertices(), 0), ed(g.num_edges(), 0);
  // Offset of each source point inside the direct sum at its image.
  std::vector<std::size_t> vpos(k.num_vertices()), epos(k.num_edges());
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (auto q : vf[v]) {
      vpos[q] = vd[v];
      vd[v] += s.vdim(q);
    }
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (auto q : ef[e]) {
      epos[q] = ed[e];
      ed[e] += s.edim(q);
    }
  std::vector<Matrix> h(g.num_edges()), t(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    h[e] = Matrix(vd[g.head(e)], ed[e]);
    t[e] = Matrix(vd[g.tail(e)], ed[e]);
    for (auto q : ef[e]) {
      place_block(h[e], vpos[k.head(q)], epos[q], s.head(q));
      place_block(t[e], vpos[k.tail(q)], epos[q], s.tail(q));
    }
  }
  return Sheaf(g, s.field(), std::move(vd), std::move(ed), std::move(h), std::move(t));
}

Sheaf indicator_sheaf(const GraphMorphism& inclusion, const PrimeField& f) {
  return pushforward_shriek(inclusion, structure_sheaf(inclusion.source(), f));
}

Sheaf tensor(const Sheaf& a, const Sheaf& b) {
  require_same_base(a, b, "tensor");
  const Digraph& g = a.base();
  const PrimeField& f = a.field();
  std::vector<std::size_t> vd(g.num_vertices()), ed(g.num_edges());
  std::vector<Matrix> h(g.num_edges()), t(g.num_edges());
  for (std::size_t v = 0; v < vd.size(); ++v) vd[v] = a.vdim(v) * b.vdim(v);
  for (std::size_t e = 0; e < ed.size(); ++e) {
    ed[e] = a.edim(e) * b.edim(e);
    h[e] = kronecker(f, a.head(e), b.head(e));
    t[e] = kronecker(f, a.tail(e), b.tail(e));
  }
  return Sheaf(g, f, std::move(vd), std::move(ed), std::move(h), std::move(t));
}

Sheaf direct_sum(const Sheaf& a, const Sheaf& b) {
  require_same_base(a, b, "direct sum");
  const Digraph& g = a.base();
  std::vector<std::size_t> vd(g.num_vertices()), ed(g.num_edges());
  std::vector<Matrix> h(g.num_edges()), t(g.num_edges());
  for (std::size_t v = 0; v < vd.size(); ++v) vd[v] = a.vdim(v) + b.vdim(v);
  for (std::size_t e = 0; e < ed.size(); ++e) {
    ed[e] = a.edim(e) + b.edim(e);
    h[e] = Matrix(vd[g.head(e)], ed[e]);
    t[e] = Matrix(vd[g.tail(e)], ed[e]);
    place_block(h[e], 0, 0, a.head(e));
    place_block(h[e], a.vdim(g.head(e)), a.edim(e), b.head(e));
    place_block(t[e], 0, 0, a.tail(e));
    place_block(t[e], a.vdim(g.tail(e)), a.edim(e), b.tail(e));
  }
  return Sheaf(g, a.field(), std::move(vd), std::move(ed), std::move(h), std::move(t));
}

Matrix head_differential(const Sheaf& s) {
  Matrix d(s.total_vdim(), s.total_edim());
  for (std::size_t e = 0; e < s.base().num_edges(); ++e) {
    place_block(d, s.vertex_offset(s.base().head(e)), s.edge_offset(e), s.head(e));
  }
  return d;
}

Matrix tail_differential(const Sheaf& s) {
  Matrix d(s.total_vdim(), s.total_edim());
  for (std::size_t e = 0; e < s.base().num_edges(); ++e) {
    place_block(d, s.vertex_offset(s.base().tail(e)), s.edge_offset(e), s.tail(e));
  }
  return d;
}

Matrix differential(const Sheaf& s) {
  return subtract(s.field(), head_differential(s), tail_differential(s));
}

HomologySummary homology(const Sheaf& s) {
  const std::size_t r = rank(s.field(), differential(s));
  return {s.total_vdim() - r, s.total_edim() - r, s.chi()};
}

void check_morphism(const SheafMorphism& m) {
  require_same_base(m.source, m.target, "sheaf morphism");
  const Digraph& g = m.source.base();
  const PrimeField& f = m.source.field();
  if (m.vmaps.size() != g.num_vertices() || m.emaps.size() != g.num_edges()) {
    throw InputError("sheaf morphism: one map per vertex and edge required");
  }
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (m.vmaps[v].rows() != m.target.vdim(v) || m.vmaps[v].cols() != m.source.vdim(v)) {
      throw InputError("sheaf morphism: map at vertex '" + g.vertex_name(v) + "' has wrong shape");
    }
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (m.emaps[e].rows() != m.target.edim(e) || m.emaps[e].cols() != m.source.edim(e)) {
      throw InputError("sheaf morphism: map at edge '" + g.edge_name(e) + "' has wrong shape");
    }
    const bool head_ok = multiply(f, m.target.head(e), m.emaps[e]) ==
                         multiply(f, m.vmaps[g.head(e)], m.source.head(e));
    const bool tail_ok = multiply(f, m.target.tail(e), m.emaps[e]) ==
                         multiply(f, m.vmaps[g.tail(e)], m.source.tail(e));
    if (!head_ok || !tail_ok) {
      throw InputError("sheaf morphism: " + std::string(head_ok ? "tail" : "head") +
                       " square does not commute at edge '" + g.edge_name(e) + "'");
    }
  }
}

SheafMorphism identity_morphism(const Sheaf& s) {
  std::vector<Matrix> vm, em;
  for (auto d : s.vdims()) vm.push_back(Matrix::identity(d));
  for (auto d : s.edims()) em.push_back(Matrix::identity(d));
  return {s, s, std::move(vm), std::move(em)};
}

SheafMorphism zero_morphism(const Sheaf& source, const Sheaf& target) {
  require_same_base(source, target, "zero morphism");
  std::vector<Matrix> vm, em;
  for (std::size_t v = 0; v < source.vdims().size(); ++v)
    vm.emplace_back(target.vdim(v), source.vdim(v));
  for (std::size_t e = 0; e < source.edims().size(); ++e)
    em.emplace_back(target.edim(e), source.edim(e));
  return {source, target, std::move(vm), std::move(em)};
}

std::size_t hom_dim(const Sheaf& a, const Sheaf& b) {
  require_same_base(a, b, "hom");
  const Digraph& g = a.base();
  const PrimeField& f = a.field();
  // Unknowns: the entries of phi_v (b.vdim x a.vdim) and phi_e (b.edim x a.edim).
  std::vector<std::size_t> voff(g.num_vertices() + 1, 0), eoff(g.num_edges() + 1, 0);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) voff[v + 1] = voff[v] + b.vdim(v) * a.vdim(v);
  eoff[0] = voff.back();
  for (std::size_t e = 0; e < g.num_edges(); ++e) eoff[e + 1] = eoff[e] + b.edim(e) * a.edim(e);
  const std::size_t unknowns = eoff.back();
  std::size_t rows = 0;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    rows += (b.vdim(g.head(e)) + b.vdim(g.tail(e))) * a.edim(e);
  Matrix sys(rows, unknowns);
  std::size_t r = 0;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::size_t ae = a.edim(e), be = b.edim(e);
    for (int side = 0; side < 2; ++side) {
      const std::size_t v = side == 0 ? g.head(e) : g.tail(e);
      const Matrix& bm = side == 0 ? b.head(e) : b.tail(e);
      const Matrix& am = side == 0 ? a.head(e) : a.tail(e);
      const std::size_t av = a.vdim(v), bv = b.vdim(v);
      // (bm phi_e - phi_v am)[i][j] = 0
      for (std::size_t i = 0; i < bv; ++i)
        for (std::size_t j = 0; j < ae; ++j, ++r) {
          for (std::size_t k = 0; k < be; ++k) {
            Residue& c = sys(r, eoff[e] + k * ae + j);
            c = f.add(c, bm(i, k));
          }
          for (std::size_t k = 0; k < av; ++k) {
            Residue& c = sys(r, voff[v] + i * av + k);
            c = f.sub(c, am(k, j));
          }
        }
    }
  }
  return unknowns - rank(f, std::move(sys));
}

namespace {

// Matrix of r restricted to `from` and corestricted to `to`, in the echelon
// bases of both; InputError if r(from) is not inside `to`.
Matrix induced_map(const PrimeField& f, const Matrix& r, const Subspace& from, const Subspace& to,
                   const std::string& where) {
  const Matrix img = multiply(f, r, from.inclusion());
  Matrix out(to.dim(), from.dim());
  std::vector<Residue> col(img.rows());
  for (std::size_t j = 0; j < img.cols(); ++j) {
    for (std::size_t i = 0; i < img.rows(); ++i) col[i] = img(i, j);
    if (!to.contains(col)) throw InputError("subspaces are not closed under restriction at " + where);
    auto c = to.coordinates(col);
    for (std::size_t i = 0; i < c.size(); ++i) out(i, j) = c[i];
  }
  return out;
}

void check_point_subspaces(const Sheaf& s, const PointSubspaces& u) {
  if (u.vertex.size() != s.base().num_vertices() || u.edge.size() != s.base().num_edges()) {
    throw InputError("one subspace per vertex and edge required");
  }
  for (std::size_t v = 0; v < u.vertex.size(); ++v)
    if (u.vertex[v].ambient_dim() != s.vdim(v)) throw InputError("vertex subspace has wrong ambient");
  for (std::size_t e = 0; e < u.edge.size(); ++e)
    if (u.edge[e].ambient_dim() != s.edim(e)) throw InputError("edge subspace has wrong ambient");
}

}  // namespace

SheafMorphism subsheaf(const Sheaf& s, const PointSubspaces& u) {
  check_point_subspaces(s, u);
  const Digraph& g = s.base();
  const PrimeField& f = s.field();
  std::vector<std::size_t> vd, ed;
  std::vector<Matrix> h, t, vm, em;
  for (const auto& x : u.vertex) {
    vd.push_back(x.dim());
    vm.push_back(x.inclusion());
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    ed.push_back(u.edge[e].dim());
    em.push_back(u.edge[e].inclusion());
    h.push_back(induced_map(f, s.head(e), u.edge[e], u.vertex[g.head(e)],
                            "head of '" + g.edge_name(e) + "'"));
    t.push_back(induced_map(f, s.tail(e), u.edge[e], u.vertex[g.tail(e)],
                            "tail of '" + g.edge_name(e) + "'"));
  }
  Sheaf sub(g, f, std::move(vd), std::move(ed), std::move(h), std::move(t));
  return {std::move(sub), s, std::move(vm), std::move(em)};
}

SheafMorphism quotient_sheaf(const Sheaf& s, const PointSubspaces& u) {
  check_point_subspaces(s, u);
  const Digraph& g = s.base();
  const PrimeField& f = s.field();
  std::vector<std::size_t> vd, ed;
  std::vector<Matrix> h, t, vm, em;
  for (const auto& x : u.vertex) {
    vm.push_back(x.quotient_map());
    vd.push_back(vm.back().rows());
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Subspace& w = u.edge[e];
    for (auto [r, end] : {std::pair{&s.head(e), g.head(e)}, std::pair{&s.tail(e), g.tail(e)}}) {
      // The restriction must send w into u(end) for the quotient to exist.
      induced_map(f, *r, w, u.vertex[end], "edge '" + g.edge_name(e) + "'");
    }
    em.push_back(w.quotient_map());
    ed.push_back(em.back().rows());
    const Matrix section = w.quotient_section();
    h.push_back(multiply(f, vm[g.head(e)], multiply(f, s.head(e), section)));
    t.push_back(multiply(f, vm[g.tail(e)], multiply(f, s.tail(e), section)));
  }
  Sheaf q(g, f, std::move(vd), std::move(ed), std::move(h), std::move(t));
  return {s, std::move(q), std::move(vm), std::move(em)};
}

SubQuotient sub_quotient(const SheafMorphism& m) {
  check_morphism(m);
  const PrimeField& f = m.source.field();
  PointSubspaces ker, img;
  SubQuotient out{identity_morphism(m.source), {}, {}, identity_morphism(m.target)};
  for (const auto& x : m.vmaps) {
    ker.vertex.push_back(kernel(f, x));
    img.vertex.push_back(image(f, x));
    out.image_vdim.push_back(img.vertex.back().dim());
  }
  for (const auto& x : m.emaps) {
    ker.edge.push_back(kernel(f, x));
    img.edge.push_back(image(f, x));
    out.image_edim.push_back(img.edge.back().dim());
  }
  try {
    out.kernel = subsheaf(m.source, ker);
    out.cokernel = quotient_sheaf(m.target, img);
  } catch (const InputError& e) {
    throw InternalError(std::string("kernel or image of a morphism is not a subsheaf: ") + e.what());
  }
  return out;
}

Sheaf random_sheaf(const Digraph& g, const PrimeField& f, std::size_t max_dim, Rng& rng,
                   std::size_t max_edge_dim) {
  std::vector<std::size_t> vd(g.num_vertices()), ed(g.num_edges());
  for (auto& d : vd) d = uniform_below(rng, max_dim + 1);
  const std::size_t emax = std::min(max_dim, max_edge_dim);
  for (auto& d : ed) d = uniform_below(rng, emax + 1);
  std::vector<Matrix> h, t;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    h.push_back(random_matrix(f, vd[g.head(e)], ed[e], rng));
    t.push_back(random_matrix(f, vd[g.tail(e)], ed[e], rng));
  }
  return Sheaf(g, f, std::move(vd), std::move(ed), std::move(h), std::move(t));
}

Subspace random_subspace(const PrimeField& f, std::size_t ambient, Rng& rng) {
  const std::size_t k = uniform_below(rng, ambient + 1);
  return Subspace::span(f, random_matrix(f, k, ambient, rng));
}

PointSubspaces random_subsheaf(const Sheaf& s, Rng& rng) {
  const Digraph& g = s.base();
  const PrimeField& f = s.field();
  PointSubspaces u;
  for (std::size_t e = 0; e < g.num_edges(); ++e) u.edge.push_back(random_subspace(f, s.edim(e), rng));
  for (std::size_t v = 0; v < g.num_vertices(); ++v) u.vertex.push_back(random_subspace(f, s.vdim(v), rng));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Matrix w = u.edge[e].inclusion();
    auto& uh = u.vertex[g.head(e)];
    uh = subspace_sum(uh, image(f, multiply(f, s.head(e), w)));
    auto& ut = u.vertex[g.tail(e)];
    ut = subspace_sum(ut, image(f, multiply(f, s.tail(e), w)));
  }
  return u;
}

}  // namespace sheaflab
