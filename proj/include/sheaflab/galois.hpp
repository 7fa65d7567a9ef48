#pragma once

// Finite groups as explicit tables, Galois covers built from coordinates,
// Cayley bigraphs, monodromy and the normal-extension construction.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sheaflab/digraph.hpp"

namespace sheaflab {

inline constexpr std::size_t kMaxGroupOrder = 5040;

class FiniteGroup {
 public:
  // table[a][b] = a*b. Throws InputError unless the group axioms hold.
  FiniteGroup(std::vector<std::string> names, std::vector<std::vector<std::size_t>> table);

  static FiniteGroup cyclic(std::size_t n);              // elements "0".."n-1"
  static FiniteGroup symmetric(std::size_t n);           // one-line notation, e.g. "021"
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);  // "(x,y)"

  std::size_t order() const { return names_.size(); }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inv(std::size_t a) const { return inverse_[a]; }
  const std::string& name(std::size_t a) const { return names_[a]; }
  std::size_t element(const std::string& name) const;  // InputError when unknown
  bool is_abelian() const;
  std::size_t element_order(std::size_t a) const;
  // Subgroup generated by `gens`, sorted.
  std::vector<std::size_t> generated_subgroup(const std::vector<std::size_t>& gens) const;

  bool operator==(const FiniteGroup& o) const { return names_ == o.names_ && table_ == o.table_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> inverse_;
  std::size_t identity_ = 0;
};

// cyclic:<n> | symmetric:<n> | product:<spec>,<spec>
FiniteGroup group_from_spec(const std::string& spec);
// Rows "<x> <x*g_0> <x*g_1> ..." after a line "elements <g_0> <g_1> ...".
FiniteGroup group_from_table_text(const std::string& text);

struct GaloisCoordinates {
  Digraph base;
  FiniteGroup group;
  std::vector<std::size_t> a;  // per base edge
};

GaloisCoordinates random_coordinates(const Digraph& base, const FiniteGroup& group,
                                     std::uint64_t seed);

struct GaloisCover {
  Digraph total;
  GraphMorphism projection;
  FiniteGroup group;
  // vertex_action[g][v] = v.g and likewise for edges; a right action.
  std::vector<std::vector<std::size_t>> vertex_action;
  std::vector<std::vector<std::size_t>> edge_action;
};

// Checks the covering property, that every g acts as an automorphism over
// the base, the right-action law and simple transitivity on every fibre.
// Returns an empty string on success, otherwise a description of the failure.
std::string galois_violation(const GaloisCover& c);

// Vertices "(v,a)", edges "(e,a)"; tail (te,a), head (he, a_e a).
GaloisCover cover_from_coordinates(const GaloisCoordinates& c);

// Coordinates read off a Galois cover after choosing the first vertex of each
// fibre as origin.
GaloisCoordinates coordinates_from_cover(const GaloisCover& c);

// Vertices named by group elements, edges "(g,i)" from g to g_i g, coloured i.
Bigraph cayley_bigraph(const FiniteGroup& group, std::size_t g1, std::size_t g2);
// The same graph as a Galois cover of B_2 under (g,i)h = (gh,i).
GaloisCover cayley_cover(const FiniteGroup& group, std::size_t g1, std::size_t g2);

// One step of a walk: an edge traversed forwards or backwards.
struct WalkStep {
  std::size_t edge;
  bool forward = true;
};

// a_{e_k} ... a_{e_1} along a closed walk at `basepoint`.
std::size_t monodromy(const GaloisCoordinates& c, std::size_t basepoint,
                      const std::vector<WalkStep>& walk);
// Image of the monodromy map on closed walks at `basepoint`.
std::vector<std::size_t> monodromy_image(const GaloisCoordinates& c, std::size_t basepoint);
// Replaces a_e by g_{he}^-1 a_e g_{te}.
GaloisCoordinates change_origin(const GaloisCoordinates& c, const std::vector<std::size_t>& g);
// Coordinates that are trivial on a BFS spanning forest, related to `c` by an
// origin change; `origins` receives the g_v used.
GaloisCoordinates normalize_on_spanning_tree(const GaloisCoordinates& c,
                                             std::vector<std::size_t>* origins = nullptr);

// Gross's construction with n = deg(pi): orderings of each fibre, acted on by
// S_n through (x)s = (x_{s(i)}).
GaloisCover normal_extension(const GraphMorphism& pi);

}  // namespace sheaflab
