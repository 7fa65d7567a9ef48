// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sheaflab/cli.hpp"
#include "sheaflab/error.hpp"
#include "sheaflab/excess.hpp"
#include "sheaflab/rho.hpp"
#include "sheaflab/twisted.hpp"

using namespace sheaflab;

namespace {

const std::filesystem::path kData = SHEAFLAB_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Cli {
  int code = 0;
  std::string out;
  bool has(const std::string& line) const { return ("\n" + out).find("\n" + line + "\n") != std::string::npos; }
};

Cli cli(std::vector<std::string> args) {
  std::ostringstream out;
  Cli r;
  r.code = run_cli(args, out);
  r.out = out.str();
  return r;
}

// x_i <= x_{i-1} + x_{i+1} at every interior position.
bool triangular(const std::vector<std::size_t>& x) {
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    if (x[i] > x[i - 1] + x[i + 1]) return false;
  return true;
}

MaxExcessOptions brute() {
  MaxExcessOptions o;
  o.method = ExcessMethod::Brute;
  return o;
}

Outcome unhappy_bundle_file() {
  const std::string file = (kData / "unhappy.sheaf").string();
  const std::string cover = (kData / "unhappy_cover.coords").string();
  const Cli tw = cli({"twisted", file, "--samples", "3", "--seed", "7"});
  const Cli tw_exact = cli({"twisted", file, "--exact"});
  const Cli me2 = cli({"maxexcess", file, "--method", "brute", "--prime", "2"});
  const Cli me3 = cli({"maxexcess", file, "--method", "brute", "--prime", "3"});
  const Cli up_tw = cli({"twisted", file, "--cover", cover, "--exact"});
  const Cli up_me = cli({"maxexcess", file, "--method", "brute", "--prime", "2", "--cover", cover});
  const bool ok = tw.code == 0 && tw.has("h1_twist=1") && tw_exact.has("h1_twist=1") &&
                  me2.has("max_excess=0") && me3.has("max_excess=0") && up_tw.has("h1_twist=0") &&
                  up_me.has("max_excess=0") && up_me.has("cover_degree=2");
  return {ok, "h1_twist=1, m.e. 0 over GF(2) and GF(3), pullback h1_twist=0 and m.e. 0"};
}

Outcome rho_is_twisted_h1() {
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Digraph g = random_digraph(1 + seed % 8, seed % 13, 10000 + seed);
    const Sheaf s = structure_sheaf(g, PrimeField());
    bad += twisted_betti(s, 3, seed).h1t != invariants(g).rho;
  }
  return {bad == 0, std::to_string(bad) + " mismatches in 50 digraphs"};
}

Outcome scaling_laws() {
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Digraph g = random_digraph(1 + seed % 6, seed % 10, 20000 + seed);
    const std::size_t d = 1 + seed % 4;
    const GraphMorphism c = random_permutation_cover(g, d, seed);
    const auto a = invariants(g), b = invariants(c.source());
    bad += b.chi != static_cast<std::int64_t>(d) * a.chi || b.rho != d * a.rho;
  }
  std::size_t checked = 0, me_bad = 0;
  const PrimeField f(2);
  for (std::uint64_t seed = 0; checked < 30 && seed < 1000; ++seed) {
    Rng rng(30000 + seed);
    Digraph g = random_digraph(1 + seed % 2, 1 + seed % 3, 30000 + seed);
    const Sheaf s = random_sheaf(g, f, 2, rng);
    const std::size_t d = 2 + seed % 2;
    const Sheaf up = pullback(random_permutation_cover(g, d, seed), s);
    if (count_compartmentalized(up) > kDefaultEnumerationBudget) continue;
    ++checked;
    me_bad += max_excess(up, brute()).value != d * max_excess(s, brute()).value;
  }
  return {bad == 0 && checked == 30 && me_bad == 0,
          std::to_string(bad) + " of 100 covers off, " + std::to_string(me_bad) + " of " +
              std::to_string(checked) + " sheaves off"};
}

Outcome supermodularity() {
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const PrimeField f(seed % 2 ? 3 : 101);
    Rng rng(40000 + seed);
    const Sheaf s = random_sheaf(random_digraph(1 + seed % 4, seed % 7, 40000 + seed), f, 3, rng);
    const auto u1 = random_compartmentalized(s, rng), u2 = random_compartmentalized(s, rng);
    bad += gamma_excess(s, u1).excess + gamma_excess(s, u2).excess >
           gamma_excess(s, intersect(u1, u2)).excess + gamma_excess(s, sum(u1, u2)).excess;
  }
  return {bad == 0, std::to_string(bad) + " violations in 500 triples"};
}

Outcome galois_decomposition() {
  std::size_t built = 0, bad = 0;
  for (std::uint64_t seed = 0; built < 20 && seed < 10000; ++seed) {
    const std::size_t n = 2 + built % 3;
    Digraph g = random_digraph(1 + seed % 3, 1 + seed % 4, 50000 + seed);
    const auto c = random_coordinates(g, FiniteGroup::cyclic(n), seed);
    const GaloisCover cover = cover_from_coordinates(c);
    if (connected_components(cover.total).count != 1) continue;
    ++built;
    const auto fp = fibre_product(cover.projection, cover.projection);
    const auto comps = connected_components(fp.graph);
    bool ok = galois_violation(cover).empty() && comps.count == n;
    for (std::size_t i = 0; ok && i < comps.count; ++i)
      ok = are_isomorphic(component_subgraph(fp.graph, comps, i), cover.total);
    bad += !ok;
  }
  return {built == 20 && bad == 0, std::to_string(bad) + " of " + std::to_string(built) + " covers off"};
}

Outcome long_exact_triangles() {
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(derive_seed(60000, seed));
    const PrimeField f(seed % 2 ? 2 : 5);
    const Sheaf s = random_sheaf(random_digraph(1 + seed % 4, seed % 7, 60000 + seed), f, 3, rng);
    const PointSubspaces u = random_subsheaf(s, rng);
    const auto a = homology(subsheaf(s, u).source), b = homology(s), c = homology(quotient_sheaf(s, u).target);
    bad += !triangular({0, a.h1, b.h1, c.h1, a.h0, b.h0, c.h0, 0});
  }
  return {bad == 0, std::to_string(bad) + " violations in 500 sequences"};
}

Outcome abelian_fourier() {
  std::size_t bad = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + seed % 2;
    const PrimeField q(seed % 4 < 2 ? 7 : 13);
    Rng rng(70000 + seed);
    Digraph g = random_digraph(1 + seed % 3, 1 + seed % 4, 70000 + seed);
    const Sheaf s = random_sheaf(g, q, 2, rng);
    const GaloisCover cover = cover_from_coordinates(random_coordinates(g, FiniteGroup::cyclic(n), seed));
    const auto d = abelian_decomposition_check(cover, s, 30, seed);
    bad += !d.decomposition_holds || !d.bound_holds;
  }
  return {bad == 0, std::to_string(bad) + " of 20 covers off"};
}

Outcome appendix_equivalence() {
  const CayleyContext c(FiniteGroup::cyclic(2), 1, 1);
  const auto subs = all_subgraphs(c.cayley.graph);
  std::size_t disagree = 0;
  for (const auto& l : subs) {
    const bool families = vertex_family_check(c, l).holds;
    bool pairs = true;
    for (const auto& lp : subs)
      pairs = pairs && shnc_verify(mask_bigraph(c.cayley, l), mask_bigraph(c.cayley, lp)).shnc_margin >= 0;
    disagree += families != pairs;
  }
  return {disagree == 0, std::to_string(disagree) + " disagreements over " + std::to_string(subs.size()) +
                             " subgraphs"};
}

Outcome rho_kernel_vanishing() {
  const CayleyContext c(FiniteGroup::cyclic(3), 1, 2);
  const PrimeField f;
  std::size_t tested = 0, family_bad = 0, dim_bad = 0;
  for (const auto& l : all_subgraphs(c.cayley.graph)) {
    const OrbitSets gl = orbit_sets(c, l);
    if (gl.rho < 1) continue;
    ++tested;
    family_bad += !vertex_family_check(c, l).holds;
    for (std::uint64_t t = 0; t < 10; ++t) {
      const Matrix m = vandermonde_totally_independent(gl.rho, c.order(), f, derive_seed(tested, t));
      const RhoKernel k = build_kernel(c, l, gl.rho, m, f);
      bool ok = true;
      for (std::size_t v = 0; v < gl.vertex.size(); ++v)
        ok = ok && k.sheaf.vdim(v) == std::max(gl.vertex[v].size(), gl.rho) - gl.rho;
      for (std::size_t e = 0; e < gl.edge.size(); ++e)
        ok = ok && k.sheaf.edim(e) == std::max(gl.edge[e].size(), gl.rho) - gl.rho;
      dim_bad += !ok;
    }
  }
  return {tested > 0 && family_bad == 0 && dim_bad == 0,
          std::to_string(tested) + " subgraphs, " + std::to_string(family_bad) + " violating, " +
              std::to_string(dim_bad) + " bad profiles"};
}

Outcome k_chain() {
  const PrimeField f(2);
  GenericOptions o;
  o.trials = 5;
  std::size_t instances = 0, bad = 0, skipped = 0;
  std::string first_bad;
  const std::vector<CayleyContext> groups = {CayleyContext(FiniteGroup::cyclic(2), 1, 1),
                                             CayleyContext(FiniteGroup::cyclic(3), 1, 2)};
  for (const auto& c : groups) {
    for (const auto& l : all_subgraphs(c.cayley.graph)) {
      const std::size_t rho = orbit_sets(c, l).rho;
      if (rho < 1 || rho > 2) continue;
      std::vector<GenericReport> reps;
      for (std::size_t k = 0; k <= rho; ++k) reps.push_back(generic_excess_experiment(c, l, k, f, o));
      if (reps.front().certified == 0 || reps.back().certified == 0) {
        ++skipped;
        continue;
      }
      ++instances;
      bool ok = modal_chain_ok(reps);
      // k = 0 is F_L G itself, so every certified value is rho |G|.
      ok = ok && reps.front().histogram.size() == 1 &&
           reps.front().histogram.begin()->first == rho * c.order();
      ok = ok && reps.back().modal == std::optional<std::size_t>(0);
      for (const auto& r : reps) ok = ok && r.all_divisible;
      if (!ok && first_bad.empty()) {
        std::ostringstream ss;
        ss << "|G|=" << c.order() << " rho=" << rho << " modal";
        for (const auto& r : reps) ss << " " << (r.modal ? std::to_string(*r.modal) : "-");
        first_bad = ss.str();
      }
      bad += !ok;
    }
  }
  std::string detail = std::to_string(instances) + " certified instances, " + std::to_string(bad) +
                       " off, " + std::to_string(skipped) + " uncertified";
  if (!first_bad.empty()) detail += "; first: " + first_bad;
  return {instances > 0 && bad == 0, detail};
}

Outcome oracle_equivalence() {
  const PrimeField f(2);
  std::size_t oracle_bad = 0, es_bad = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(80000 + seed);
    const Sheaf s = random_sheaf(random_digraph(1 + seed % 3, 1 + seed % 4, 80000 + seed), f, 2, rng);
    oracle_bad += max_excess(s, brute()).value != max_excess_subsheaf_oracle(s).value;
  }
  MaxExcessOptions es;
  es.method = ExcessMethod::EdgeSimple;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PrimeField q(seed % 2 ? 3 : 2);
    Rng rng(90000 + seed);
    const Sheaf s = random_sheaf(random_digraph(1 + seed % 3, 1 + seed % 5, 90000 + seed), q, 2, rng, 1);
    const MaxExcessResult r = max_excess(s, es);
    es_bad += !r.exact || r.value != max_excess(s, brute()).value;
  }
  return {oracle_bad == 0 && es_bad == 0, std::to_string(oracle_bad) + " of 200 oracle, " +
                                              std::to_string(es_bad) + " of 100 edge-simple off"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: no limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "unhappy 4-bundle", 1.0, unhappy_bundle_file},
      {2, "rho equals twisted h1 of the structure sheaf", 5.0, rho_is_twisted_h1},
      {3, "chi, rho and maximum excess scale under covers", 0, scaling_laws},
      {4, "supermodularity of excess", 0, supermodularity},
      {5, "Galois self fibre product splits", 0, galois_decomposition},
      {6, "long exact sequence triangle inequalities", 0, long_exact_triangles},
      {7, "Abelian character decomposition", 0, abelian_fourier},
      {8, "vertex families match SHNC on Cayley(Z/2;1,1)", 30.0, appendix_equivalence},
      {9, "rho-kernels on Cayley(Z/3;1,2)", 0, rho_kernel_vanishing},
      {10, "k-chain on tiny instances", 0, k_chain},
      {11, "brute force, subsheaf oracle and edge-simple agree", 0, oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    failed += !o.pass;
    std::printf("criterion %2d %s  %s (%s) [%.2f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
