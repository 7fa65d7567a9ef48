#pragma once

// Rho-kernels on Cayley bigraphs, the vertex-family criterion, SHNC checks,
// Stallings cores and small genericity experiments.
//
// Throughout, G is the Cayley bigraph of a group with generators g1, g2, as
// built by cayley_bigraph: vertex x is element x, edge (x,i) has index
// (i-1)|G| + x and runs x -> g_i x. The group acts on the right, P -> Pg.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sheaflab/excess.hpp"
#include "sheaflab/galois.hpp"
#include "sheaflab/sheaf.hpp"

namespace sheaflab {

struct CayleyContext {
  FiniteGroup group;
  std::size_t g1 = 0, g2 = 0;
  Bigraph cayley;

  CayleyContext(FiniteGroup g, std::size_t gen1, std::size_t gen2);
  std::size_t order() const { return group.order(); }
  // Index of P g, for P a vertex (point < |G|) or an edge.
  std::size_t translate_vertex(std::size_t v, std::size_t g) const;
  std::size_t translate_edge(std::size_t e, std::size_t g) const;
};

// A subgraph of G as vertex and edge masks.
struct SubgraphMask {
  std::vector<bool> vertex;
  std::vector<bool> edge;
};

SubgraphMask full_mask(const Digraph& g);
// Matches names; InputError for unknown names or mismatched endpoints.
SubgraphMask mask_from_digraph(const Digraph& g, const Digraph& sub);
Digraph mask_subgraph(const Digraph& g, const SubgraphMask& m);
Bigraph mask_bigraph(const Bigraph& g, const SubgraphMask& m);
// Every subgraph of g; BudgetError when there are more than `budget`.
std::vector<SubgraphMask> all_subgraphs(const Digraph& g, std::uint64_t budget = 1000000);

// gl(P) = { g : P in Lg }, sorted, for every vertex and edge of G.
struct OrbitSets {
  std::vector<std::vector<std::size_t>> vertex;
  std::vector<std::vector<std::size_t>> edge;
  std::size_t rho = 0;  // rho(L)
};

// InputError unless L is a subgraph of G.
OrbitSets orbit_sets(const CayleyContext& c, const SubgraphMask& l);

struct RhoKernel {
  OrbitSets gl;
  std::size_t k = 0;
  Matrix m;  // k x |G|
  // Values as subspaces of GF(p)^{gl(P)}; the sheaf uses their echelon bases.
  std::vector<Subspace> vertex_value;
  std::vector<Subspace> edge_value;
  Sheaf sheaf;
};

// Kernel of F_L G -> F^k given by M. InputError naming the first point where
// the columns over gl(P) do not span F^k.
RhoKernel build_kernel(const CayleyContext& c, const SubgraphMask& l, std::size_t k, const Matrix& m,
                       const PrimeField& f);
// M with columns permuted so that column h of the result is column h g^{-1} of M.
Matrix translate_columns(const CayleyContext& c, const Matrix& m, std::size_t g);

// Per vertex, a subset of gl(v) as a bitmask over group elements.
struct VertexFamily {
  std::vector<std::uint64_t> u;
};

// sum_e |U_E(e)|_rho - sum_v |U(v)|_rho with |x|_k = max(0, x - k).
std::int64_t family_deficit(const CayleyContext& c, const OrbitSets& gl, const VertexFamily& fam);

struct FamilyCheck {
  bool holds = true;
  bool exhaustive = true;
  std::int64_t worst_deficit = 0;
  VertexFamily worst;  // lexicographically least family of largest deficit
  std::uint64_t families = 0;  // size of the family space or samples drawn
  std::uint64_t visited = 0;   // families evaluated after pruning
};

struct FamilyCheckOptions {
  std::uint64_t budget = 1000000;
  // When the family space exceeds the budget, sample this many random
  // families instead of failing; the result is marked non-exhaustive.
  std::uint64_t samples_over_budget = 0;
  std::uint64_t seed = 0;
};

FamilyCheck vertex_family_check(const CayleyContext& c, const SubgraphMask& l,
                                const FamilyCheckOptions& opt = {});

// The graph-side reading of a family: positive set L' and the subgraph H of
// L x_{B_2} L' built from it.
struct DeficitDecomposition {
  std::int64_t deficit = 0;
  std::int64_t minus_chi_h = 0;
  std::int64_t chi_l_prime = 0;
  std::size_t rho = 0;
  Digraph h;
  Digraph l_prime;
};
DeficitDecomposition decompose_deficit(const CayleyContext& c, const SubgraphMask& l,
                                       const VertexFamily& fam);

// Straight subspace of a rho-kernel: U(v) = Free_{U(v)}(M), in the
// coordinates of the kernel's vertex values.
CompartmentalizedSubspace straight_subspace(const RhoKernel& k, const VertexFamily& fam,
                                            const PrimeField& f);

struct ShncReport {
  std::size_t rho_k = 0, rho_l = 0;
  std::size_t rho_product = 0, rho_prime_product = 0;
  std::int64_t shnc_margin = 0;  // rho(K) rho(L) - rho(K x L)
  std::int64_t hnc_margin = 0;   // rho(K) rho(L) - rho'(K x L)
  bool holds() const { return shnc_margin >= 0 && hnc_margin >= 0; }
  Bigraph product;
};

// InputError unless both bigraphs are etale over B_2.
ShncReport shnc_verify(const Bigraph& k, const Bigraph& l);

// Words over a, A, b, B with uppercase the inverse. The basepoint is vertex 0
// and is kept even when it is a leaf.
Bigraph stallings_core(const std::vector<std::string>& words);
std::vector<std::string> parse_words(const std::string& comma_separated);

// An edge whose removal lowers rho by exactly one, or nullopt when rho = 0.
std::optional<std::size_t> rho_decreasing_edge(const Digraph& g);

struct GenericReport {
  std::size_t k = 0;
  std::size_t trials = 0;
  std::size_t certified = 0;
  std::size_t skipped = 0;
  std::map<std::size_t, std::size_t> histogram;  // m.e. -> count
  std::optional<std::size_t> modal;             // most frequent, smallest on ties
  bool all_divisible = true;                    // by |G|
  std::string method;
};

struct GenericOptions {
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::size_t matrix_attempts = 1000;
};

// Samples totally independent M in F^{k x G} by rejection and computes a
// certified maximum excess of each kernel. Trials without a totally
// independent M or a certified method are counted as skipped.
GenericReport generic_excess_experiment(const CayleyContext& c, const SubgraphMask& l,
                                        std::size_t k, const PrimeField& f,
                                        const GenericOptions& opt = {});

// Modal values are non-increasing in k, strictly until they reach zero.
bool modal_chain_ok(const std::vector<GenericReport>& by_k);

}  // namespace sheaflab
