#pragma once

// Sheaves of GF(p)-vector spaces on digraphs and the functors between them.
//
// F(V) and F(E) use the concatenated bases of the vertex and edge values in
// declaration order. Restriction maps act on column vectors:
// head(e) is vdim(he) x edim(e), tail(e) is vdim(te) x edim(e).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sheaflab/digraph.hpp"
#include "sheaflab/linalg.hpp"

namespace sheaflab {

class Sheaf {
 public:
  // Throws InputError on any shape mismatch, naming the edge.
  Sheaf(Digraph base, PrimeField field, std::vector<std::size_t> vdim,
        std::vector<std::size_t> edim, std::vector<Matrix> head, std::vector<Matrix> tail);

  const Digraph& base() const { return base_; }
  const PrimeField& field() const { return field_; }
  std::size_t vdim(std::size_t v) const { return vdim_[v]; }
  std::size_t edim(std::size_t e) const { return edim_[e]; }
  const std::vector<std::size_t>& vdims() const { return vdim_; }
  const std::vector<std::size_t>& edims() const { return edim_; }
  const Matrix& head(std::size_t e) const { return head_[e]; }
  const Matrix& tail(std::size_t e) const { return tail_[e]; }

  std::size_t total_vdim() const { return voff_.back(); }
  std::size_t total_edim() const { return eoff_.back(); }
  std::size_t vertex_offset(std::size_t v) const { return voff_[v]; }
  std::size_t edge_offset(std::size_t e) const { return eoff_[e]; }
  std::int64_t chi() const {
    return static_cast<std::int64_t>(total_vdim()) - static_cast<std::int64_t>(total_edim());
  }

  bool operator==(const Sheaf& o) const {
    return base_ == o.base_ && field_ == o.field_ && vdim_ == o.vdim_ && edim_ == o.edim_ &&
           head_ == o.head_ && tail_ == o.tail_;
  }

 private:
  Digraph base_;
  PrimeField field_;
  std::vector<std::size_t> vdim_, edim_;
  std::vector<Matrix> head_, tail_;
  std::vector<std::size_t> voff_, eoff_;
};

Sheaf structure_sheaf(const Digraph& g, const PrimeField& f);
// Constant sheaf with value GF(p)^dim and identity restrictions.
Sheaf constant_sheaf(const Digraph& g, const PrimeField& f, std::size_t dim);
Sheaf zero_sheaf(const Digraph& g, const PrimeField& f);
// The unhappy 4-bundle on B_2: value F^4 at v, F^2 on e1 and e2.
Sheaf unhappy_bundle(const PrimeField& f);

Sheaf pullback(const GraphMorphism& f, const Sheaf& s);
// Direct sums over fibres in source declaration order.
Sheaf pushforward_shriek(const GraphMorphism& f, const Sheaf& s);
// Extension by zero is the same construction; for a subgraph inclusion
// applied to the structure sheaf it gives the indicator sheaf of the subgraph.
inline Sheaf extend_by_zero(const GraphMorphism& f, const Sheaf& inner) {
  return pushforward_shriek(f, inner);
}
Sheaf indicator_sheaf(const GraphMorphism& inclusion, const PrimeField& f);

Sheaf tensor(const Sheaf& a, const Sheaf& b);
Sheaf direct_sum(const Sheaf& a, const Sheaf& b);

Matrix head_differential(const Sheaf& s);  // F(E) -> F(V)
Matrix tail_differential(const Sheaf& s);
Matrix differential(const Sheaf& s);       // d_h - d_t

struct HomologySummary {
  std::size_t h0 = 0;
  std::size_t h1 = 0;
  std::int64_t chi = 0;
};
HomologySummary homology(const Sheaf& s);

struct SheafMorphism {
  Sheaf source;
  Sheaf target;
  std::vector<Matrix> vmaps;  // target vdim x source vdim
  std::vector<Matrix> emaps;  // target edim x source edim
};

// Throws InputError unless shapes match and both squares commute at every edge.
void check_morphism(const SheafMorphism& m);
SheafMorphism identity_morphism(const Sheaf& s);
SheafMorphism zero_morphism(const Sheaf& source, const Sheaf& target);

// Dimension of Hom(a, b).
std::size_t hom_dim(const Sheaf& a, const Sheaf& b);

// Per-point subspaces; a subsheaf when the restrictions map edge subspaces
// into vertex subspaces.
struct PointSubspaces {
  std::vector<Subspace> vertex;
  std::vector<Subspace> edge;
};

// Subsheaf on the given subspaces (canonical echelon bases) and its inclusion.
// Throws InputError when the subspaces are not closed under restriction.
SheafMorphism subsheaf(const Sheaf& s, const PointSubspaces& u);
// Quotient by a subsheaf, expressed on the complement coordinates of the
// echelon bases, together with the projection.
SheafMorphism quotient_sheaf(const Sheaf& s, const PointSubspaces& u);

struct SubQuotient {
  SheafMorphism kernel;  // inclusion of ker(m) into m.source
  std::vector<std::size_t> image_vdim;
  std::vector<std::size_t> image_edim;
  SheafMorphism cokernel;  // projection of m.target onto m.target / im(m)
};
SubQuotient sub_quotient(const SheafMorphism& m);

// Random sheaf with point dimensions in [0, max_dim] and uniform entries.
Sheaf random_sheaf(const Digraph& g, const PrimeField& f, std::size_t max_dim, Rng& rng,
                   std::size_t max_edge_dim = SIZE_MAX);
// Random subspaces closed under restriction: random edge subspaces, then
// vertex subspaces containing their images.
PointSubspaces random_subsheaf(const Sheaf& s, Rng& rng);
Subspace random_subspace(const PrimeField& f, std::size_t ambient, Rng& rng);

}  // namespace sheaflab
