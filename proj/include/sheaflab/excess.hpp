#pragma once

// Excess of vertex subspaces and the maximum excess of a sheaf.
//
// For U inside F(V), taken one subspace per vertex, the head/tail
// neighbourhood Gamma(U) collects the edge vectors whose head and tail
// restrictions both land in U. excess(U) = dim Gamma(U) - dim U.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sheaflab/sheaf.hpp"
#include "sheaflab/twisted.hpp"

namespace sheaflab {

// One subspace of F(v) per vertex.
struct CompartmentalizedSubspace {
  std::vector<Subspace> per_vertex;
};

CompartmentalizedSubspace zero_subspace(const Sheaf& s);
CompartmentalizedSubspace full_subspace(const Sheaf& s);
CompartmentalizedSubspace intersect(const CompartmentalizedSubspace& a,
                                    const CompartmentalizedSubspace& b);
CompartmentalizedSubspace sum(const CompartmentalizedSubspace& a,
                              const CompartmentalizedSubspace& b);
CompartmentalizedSubspace random_compartmentalized(const Sheaf& s, Rng& rng);

struct DimensionProfile {
  std::vector<std::size_t> vertex;
  std::vector<std::size_t> edge;

  std::int64_t chi() const;
  std::size_t total() const;
};

struct ExcessResult {
  std::vector<Subspace> gamma;  // per edge
  DimensionProfile profile;     // dim U(v) and dim Gamma(e)
  std::int64_t excess = 0;
};

// Throws InputError when u does not match the sheaf's vertex dimensions.
ExcessResult gamma_excess(const Sheaf& s, const CompartmentalizedSubspace& u);

enum class ExcessMethod { Brute, EdgeSimple, Pullback, Auto };
const char* to_string(ExcessMethod m);
ExcessMethod parse_excess_method(const std::string& name);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1000000;

struct CoverSearchOptions {
  std::size_t max_degree = 24;
  std::size_t attempts_per_degree = 4;
  std::uint64_t seed = 0;
};

struct MaxExcessOptions {
  ExcessMethod method = ExcessMethod::Auto;
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::size_t samples = kDefaultTwistSamples;
  std::uint64_t seed = 0;
  CoverSearchOptions cover;
  // Brute only: also list every maximizer (at most this many).
  std::size_t collect_maximizers = 0;
};

struct MaxExcessResult {
  std::size_t value = 0;
  ExcessMethod method = ExcessMethod::Brute;
  bool exact = true;  // false only for randomized twisted estimates
  std::uint64_t enumerated = 0;
  // Brute: the lexicographically least maximizer.
  std::optional<CompartmentalizedSubspace> witness;
  std::vector<CompartmentalizedSubspace> maximizers;
  // Pullback: the certifying cover and the twisted estimate on it.
  std::optional<GraphMorphism> cover;
  std::size_t cover_degree = 0;
  std::size_t girth_bound = 0;
  std::optional<TwistedBetti> twisted;
};

// Brute needs GF(2) or GF(3) and at most `budget` subspace tuples.
// Edge-simple needs every edge dimension at most one. Pullback needs a cover
// of Abelian girth at least 2(dim F(V) + dim F(E)) + 1 within the search
// options. Failures throw InputError or BudgetError; nothing is estimated
// silently.
MaxExcessResult max_excess(const Sheaf& s, const MaxExcessOptions& opt = {});

// Number of compartmentalized subspaces, saturating at UINT64_MAX.
std::uint64_t count_compartmentalized(const Sheaf& s);

struct CoverSearchResult {
  std::optional<GraphMorphism> cover;
  std::size_t degree = 0;
  std::size_t tried = 0;
  std::size_t best_girth = 0;  // largest Abelian girth seen, capped at bound
};

// Randomized search over permutation covers of increasing degree, each
// verified by a bounded Abelian girth computation. g itself is returned when
// it already qualifies.
CoverSearchResult high_abelian_girth_cover(const Digraph& g, std::size_t bound,
                                           const CoverSearchOptions& opt = {});

// max over subsheaves F' built from compartmentalized U of -chi(F'), with
// the edge values found by testing every edge subspace for closure.
struct SubsheafOracleResult {
  std::size_t value = 0;
  std::optional<SheafMorphism> witness;
};
SubsheafOracleResult max_excess_subsheaf_oracle(const Sheaf& s,
                                                std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace sheaflab
