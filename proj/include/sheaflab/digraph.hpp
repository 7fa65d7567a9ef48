#pragma once

// Finite directed multigraphs (self-loops and parallel edges allowed),
// bigraphs, morphisms, fibre products and the classical invariants.
//
// Vertices and edges are indexed 0..n-1 in declaration order; that order is
// the canonical basis order for every matrix built downstream.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sheaflab {

class Digraph {
 public:
  std::size_t add_vertex(const std::string& name);
  std::size_t add_edge(const std::string& name, std::size_t tail, std::size_t head);
  std::size_t add_edge(const std::string& name, const std::string& tail, const std::string& head);

  std::size_t num_vertices() const { return vertex_names_.size(); }
  std::size_t num_edges() const { return edge_names_.size(); }

  std::size_t tail(std::size_t e) const { return tail_[e]; }
  std::size_t head(std::size_t e) const { return head_[e]; }

  const std::string& vertex_name(std::size_t v) const { return vertex_names_[v]; }
  const std::string& edge_name(std::size_t e) const { return edge_names_[e]; }

  std::optional<std::size_t> find_vertex(const std::string& name) const;
  std::optional<std::size_t> find_edge(const std::string& name) const;
  // InputError when absent.
  std::size_t vertex(const std::string& name) const;
  std::size_t edge(const std::string& name) const;

  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_[v]; }

  // Structural equality including names and declaration order.
  bool operator==(const Digraph& o) const {
    return vertex_names_ == o.vertex_names_ && edge_names_ == o.edge_names_ &&
           tail_ == o.tail_ && head_ == o.head_;
  }

 private:
  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::vector<std::size_t> tail_;
  std::vector<std::size_t> head_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::unordered_map<std::string, std::size_t> vertex_index_;
  std::unordered_map<std::string, std::size_t> edge_index_;
};

// One vertex, `loops` self-loops named e1, e2, ...
Digraph bouquet(std::size_t loops);

// A digraph with every edge coloured 1 or 2; equivalently a morphism to B_2.
struct Bigraph {
  Digraph graph;
  std::vector<int> colour;  // per edge, 1 or 2
};

Bigraph bouquet_bigraph();  // B_2 with e1 coloured 1 and e2 coloured 2

class GraphMorphism {
 public:
  // Throws InputError unless heads and tails commute with the maps.
  GraphMorphism(Digraph source, Digraph target, std::vector<std::size_t> vmap,
                std::vector<std::size_t> emap);

  static GraphMorphism identity(const Digraph& g);
  // Colouring map of a bigraph to B_2.
  static GraphMorphism colouring(const Bigraph& b);
  // Inclusion of `sub` into `g`, matching vertices and edges by name.
  static GraphMorphism inclusion(const Digraph& sub, const Digraph& g);

  const Digraph& source() const { return source_; }
  const Digraph& target() const { return target_; }
  std::size_t vmap(std::size_t v) const { return vmap_[v]; }
  std::size_t emap(std::size_t e) const { return emap_[e]; }
  const std::vector<std::size_t>& vmaps() const { return vmap_; }
  const std::vector<std::size_t>& emaps() const { return emap_; }

  // Fibres in source declaration order.
  std::vector<std::vector<std::size_t>> vertex_fibres() const;
  std::vector<std::vector<std::size_t>> edge_fibres() const;

  GraphMorphism then(const GraphMorphism& next) const;  // next after this

 private:
  Digraph source_;
  Digraph target_;
  std::vector<std::size_t> vmap_;
  std::vector<std::size_t> emap_;
};

enum class MorphismKind { covering, etale, neither };

struct MorphismClass {
  MorphismKind kind;
  std::optional<std::size_t> degree;  // set when every fibre has the same size
};

MorphismClass classify_morphism(const GraphMorphism& m);
bool is_covering(const GraphMorphism& m);
bool is_etale(const GraphMorphism& m);
const char* to_string(MorphismKind k);

struct FibreProduct {
  Digraph graph;
  GraphMorphism first;
  GraphMorphism second;
};

// Vertices (v1,v2) and edges (e1,e2) with equal images; names "(a,b)".
FibreProduct fibre_product(const GraphMorphism& f1, const GraphMorphism& f2);
// Fibre product of two bigraphs over B_2; edges inherit the common colour.
Bigraph fibre_product_over_b2(const Bigraph& k, const Bigraph& l);

struct GraphInvariants {
  std::size_t h0 = 0;
  std::size_t h1 = 0;
  std::int64_t chi = 0;
  std::size_t rho = 0;
  std::size_t rho_prime = 0;
  std::size_t acyclic_components = 0;
};

GraphInvariants invariants(const Digraph& g);
std::size_t reduced_cyclicity(const Digraph& g);

// Component index per vertex (numbered by first vertex in declaration order),
// and the number of components.
struct Components {
  std::vector<std::size_t> of_vertex;
  std::size_t count = 0;
};
Components connected_components(const Digraph& g);

// Subgraph spanned by one component, with names preserved.
Digraph component_subgraph(const Digraph& g, const Components& c, std::size_t index);

// Subgraph selected by masks; an edge requires both endpoints. Names preserved.
Digraph subgraph(const Digraph& g, const std::vector<bool>& keep_vertex,
                 const std::vector<bool>& keep_edge);

struct Girths {
  std::optional<std::size_t> girth;           // nullopt: exceeds the bound
  std::optional<std::size_t> abelian_girth;   // nullopt: exceeds the bound
};

// Girth of the underlying undirected multigraph (a self-loop has length 1, a
// pair of parallel edges length 2) and the girth of the universal Abelian
// cover, both searched up to `bound`.
Girths girths(const Digraph& g, std::size_t bound);
std::optional<std::size_t> girth(const Digraph& g, std::size_t bound);
std::optional<std::size_t> abelian_girth(const Digraph& g, std::size_t bound);

// Exhaustive backtracking; intended for small graphs (a dozen vertices).
bool are_isomorphic(const Digraph& a, const Digraph& b);

// Degree-d cover with an independent uniformly random permutation per edge.
// Vertices "(v,i)", edges "(e,i)"; edge (e,i) runs from (te,i) to (he,sigma_e(i)).
GraphMorphism random_permutation_cover(const Digraph& g, std::size_t degree, std::uint64_t seed);
// Random digraph on n vertices with m edges; endpoints uniform (loops allowed).
Digraph random_digraph(std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace sheaflab
