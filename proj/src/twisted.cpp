#include "sheaflab/twisted.hpp"

#include <algorithm>
#include <set>

#include "sheaflab/error.hpp"
#include "sheaflab/util.hpp"

namespace sheaflab {

Twist random_twist(const Sheaf& s, Rng& rng) {
  Twist t;
  t.psi.resize(s.base().num_edges());
  for (auto& x : t.psi) x = s.field().random(rng);
  return t;
}

Sheaf twisted_sheaf(const Sheaf& s, const Twist& t) {
  const Digraph& g = s.base();
  if (t.psi.size() != g.num_edges()) throw InputError("twist: one scalar per edge required");
  std::vector<Matrix> h, tl;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    h.push_back(s.head(e));
    tl.push_back(scale(s.field(), s.tail(e), s.field().reduce(t.psi[e])));
  }
  return Sheaf(g, s.field(), s.vdims(), s.edims(), std::move(h), std::move(tl));
}

Matrix twisted_differential(const Sheaf& s, const Twist& t) {
  return differential(twisted_sheaf(s, t));
}

namespace {

TwistedBetti estimate(const Sheaf& s, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InputError("twisted Betti numbers need at least one sample");
  std::vector<std::size_t> ranks(samples, 0);
  parallel_chunks(samples, thread_budget(), [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, i));
      ranks[i] = rank(s.field(), twisted_differential(s, random_twist(s, rng)));
    }
  });
  TwistedBetti out;
  out.rank = *std::max_element(ranks.begin(), ranks.end());
  out.h1t = s.total_edim() - out.rank;
  out.h0t = s.total_vdim() - out.rank;
  out.samples = samples;
  out.degree = std::min(s.total_edim(), s.total_vdim());
  out.modulus = s.field().modulus();
  return out;
}

}  // namespace

TwistedBetti twisted_betti(const Sheaf& s, std::size_t samples, std::uint64_t seed) {
  const std::uint64_t deg = std::min(s.total_edim(), s.total_vdim());
  if (s.field().modulus() <= kTwistSafetyFactor * deg) {
    throw InputError("field GF(" + std::to_string(s.field().modulus()) +
                     ") is too small for twisted Betti numbers of degree " + std::to_string(deg) +
                     "; need p > " + std::to_string(kTwistSafetyFactor * deg));
  }
  return estimate(s, samples, seed);
}

TwistedBetti twisted_betti_small_field(const Sheaf& s, std::size_t samples, std::uint64_t seed) {
  for (auto d : s.edims())
    if (d >= s.field().modulus()) {
      throw InputError("edge dimension " + std::to_string(d) + " is not below the field size");
    }
  return estimate(s, samples, seed);
}

TwistedBetti twisted_betti_exhaustive(const Sheaf& s, std::uint64_t budget) {
  std::size_t k = 0;
  for (auto d : s.edims()) k = std::max(k, d);
  if (k >= s.field().modulus()) throw InputError("field is too small for an exact twisted grid");
  const std::size_t m = s.base().num_edges();
  std::uint64_t count = 1;
  for (std::size_t e = 0; e < m; ++e) {
    if (count > budget / (k + 1)) {
      throw BudgetError("exact twisted grid has more than " + std::to_string(budget) + " points");
    }
    count *= k + 1;
  }
  const std::size_t chunks = thread_budget();
  std::vector<std::size_t> best(chunks, 0);
  parallel_chunks(count, chunks, [&](std::size_t begin, std::size_t end, std::size_t c) {
    Twist t{std::vector<Residue>(m, 0)};
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t x = i;
      for (std::size_t e = 0; e < m; ++e) {
        t.psi[e] = static_cast<Residue>(x % (k + 1));
        x /= k + 1;
      }
      best[c] = std::max(best[c], rank(s.field(), twisted_differential(s, t)));
    }
  });
  TwistedBetti out;
  out.rank = *std::max_element(best.begin(), best.end());
  out.h1t = s.total_edim() - out.rank;
  out.h0t = s.total_vdim() - out.rank;
  out.samples = count;
  out.degree = std::min(s.total_edim(), s.total_vdim());
  out.modulus = s.field().modulus();
  out.exact = true;
  return out;
}

namespace {

Residue primitive_root(const PrimeField& f) {
  const std::uint64_t p = f.modulus();
  if (p == 2) return 1;
  std::vector<std::uint64_t> factors;
  std::uint64_t m = p - 1;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d) continue;
    factors.push_back(d);
    while (m % d == 0) m /= d;
  }
  if (m > 1) factors.push_back(m);
  for (Residue g = 2; g < p; ++g) {
    bool ok = true;
    for (auto q : factors) ok = ok && f.pow(g, (p - 1) / q) != 1;
    if (ok) return g;
  }
  throw InternalError("no primitive root found");
}

}  // namespace

std::vector<std::vector<Residue>> group_characters(const FiniteGroup& g, const PrimeField& f) {
  const std::size_t n = g.order();
  if (!g.is_abelian()) throw InputError("characters need an Abelian group");
  if ((f.modulus() - 1) % n != 0) {
    throw InputError("GF(" + std::to_string(f.modulus()) + ") has no primitive " +
                     std::to_string(n) + "-th root of unity");
  }
  const Residue zeta = f.pow(primitive_root(f), (f.modulus() - 1) / n);
  std::vector<std::size_t> gens;
  for (std::size_t x = 0; x < n; ++x) {
    auto sub = g.generated_subgroup(gens);
    if (!std::binary_search(sub.begin(), sub.end(), x)) gens.push_back(x);
  }
  std::set<std::vector<Residue>> found;
  std::vector<std::size_t> pick(gens.size(), 0);
  for (;;) {
    // Extend generator images to the whole group, rejecting inconsistencies.
    std::vector<Residue> val(n, 0);
    val[g.identity()] = 1;
    std::vector<std::size_t> stack{g.identity()};
    bool ok = true;
    while (!stack.empty() && ok) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t i = 0; i < gens.size() && ok; ++i) {
        const std::size_t y = g.mul(gens[i], x);
        const Residue v = f.mul(f.pow(zeta, pick[i]), val[x]);
        if (val[y] == 0) {
          val[y] = v;
          stack.push_back(y);
        } else {
          ok = val[y] == v;
        }
      }
    }
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b) ok = val[g.mul(a, b)] == f.mul(val[a], val[b]);
    if (ok) found.insert(val);
    std::size_t i = 0;
    while (i < pick.size() && pick[i] == n - 1) pick[i++] = 0;
    if (i == pick.size()) break;
    ++pick[i];
  }
  if (found.size() != n) throw InternalError("character count differs from the group order");
  return {found.begin(), found.end()};
}

AbelianDecomposition abelian_decomposition_check(const GaloisCover& cover, const Sheaf& s,
                                                 std::size_t samples, std::uint64_t seed) {
  if (!(cover.projection.target() == s.base())) {
    throw InputError("decomposition: cover is not over the sheaf's graph");
  }
  const PrimeField& f = s.field();
  const auto chars = group_characters(cover.group, f);
  const GaloisCoordinates coords = coordinates_from_cover(cover);
  AbelianDecomposition r;
  r.degree = cover.group.order();
  const auto up = homology(pullback(cover.projection, s));
  r.h0_pullback = up.h0;
  r.h1_pullback = up.h1;
  for (const auto& nu : chars) {
    Twist t;
    for (auto a : coords.a) t.psi.push_back(nu[a]);
    const auto h = homology(twisted_sheaf(s, t));
    r.h0_character_sum += h.h0;
    r.h1_character_sum += h.h1;
  }
  r.twisted = twisted_betti_small_field(s, samples, seed);
  r.decomposition_holds = r.h0_pullback == r.h0_character_sum && r.h1_pullback == r.h1_character_sum;
  r.bound_holds = r.h0_pullback >= r.degree * r.twisted.h0t && r.h1_pullback >= r.degree * r.twisted.h1t;
  return r;
}

}  // namespace sheaflab
