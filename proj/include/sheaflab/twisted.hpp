#pragma once

// Twists, twisted Betti numbers by random specialization, and the Fourier
// decomposition of pullbacks along Abelian Galois covers.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sheaflab/galois.hpp"
#include "sheaflab/sheaf.hpp"

namespace sheaflab {

// One scalar per edge, multiplying the tail restriction.
struct Twist {
  std::vector<Residue> psi;
};

Twist random_twist(const Sheaf& s, Rng& rng);
Sheaf twisted_sheaf(const Sheaf& s, const Twist& t);
// d_h - d_t with the edge block of e scaled by psi(e).
Matrix twisted_differential(const Sheaf& s, const Twist& t);

inline constexpr std::size_t kDefaultTwistSamples = 3;
inline constexpr std::uint64_t kTwistSafetyFactor = 2;

struct TwistedBetti {
  std::size_t h0t = 0;
  std::size_t h1t = 0;
  std::size_t rank = 0;      // largest rank observed
  std::size_t samples = 0;
  std::uint64_t degree = 0;  // min(dim F(E), dim F(V))
  std::uint64_t modulus = 0;
  bool exact = false;        // every twist of a certifying grid was tried
  // Per-sample Schwartz-Zippel bound degree / modulus on missing the generic rank.
  double failure_bound() const {
    if (exact || modulus == 0) return 0.0;
    return static_cast<double>(degree) / static_cast<double>(modulus);
  }
};

// Throws InputError unless p > kTwistSafetyFactor * degree, or when samples is 0.
TwistedBetti twisted_betti(const Sheaf& s, std::size_t samples = kDefaultTwistSamples,
                           std::uint64_t seed = 0);
// Same estimate without the field-size precondition; only requires p to
// exceed every edge dimension, so the generic rank is attained somewhere.
TwistedBetti twisted_betti_small_field(const Sheaf& s, std::size_t samples, std::uint64_t seed);
// Exact generic rank. Every minor of the twisted differential has degree at
// most edim(e) in psi(e), so the grid {0..k}^E with k = max edim contains a
// twist attaining it. Throws BudgetError when (k+1)^|E| exceeds the budget and
// InputError when p <= k.
TwistedBetti twisted_betti_exhaustive(const Sheaf& s, std::uint64_t budget = 1000000);

// All characters of an Abelian group into GF(q)^*, as tables element -> value.
// Throws InputError unless the group is Abelian and |G| divides q - 1.
std::vector<std::vector<Residue>> group_characters(const FiniteGroup& g, const PrimeField& f);

struct AbelianDecomposition {
  std::size_t degree = 0;
  std::size_t h0_pullback = 0, h1_pullback = 0;
  std::size_t h0_character_sum = 0, h1_character_sum = 0;
  TwistedBetti twisted;
  bool decomposition_holds = false;
  bool bound_holds = false;  // h_i(pullback) >= degree * h_i^twist
};

// `cover` must be a Galois cover of s.base() with Abelian group; the field
// of `s` must contain |G| distinct |G|-th roots of unity.
AbelianDecomposition abelian_decomposition_check(const GaloisCover& cover, const Sheaf& s,
                                                 std::size_t samples = 30,
                                                 std::uint64_t seed = 0);

}  // namespace sheaflab
