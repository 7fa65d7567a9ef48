#include "sheaflab/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sheaflab/error.hpp"
#include "sheaflab/excess.hpp"
#include "sheaflab/io.hpp"
#include "sheaflab/rho.hpp"
#include "sheaflab/twisted.hpp"
#include "sheaflab/util.hpp"

namespace sheaflab {

namespace fs = std::filesystem;

namespace {

// Raised by a command once its report is complete but a checked property
// failed; the report is still printed.
struct Violation {};

class Report {
 public:
  template <class T>
  void add(const std::string& key, const T& value) {
    std::ostringstream ss;
    ss << value;
    lines_.push_back(key + "=" + ss.str());
  }
  void add(const std::string& key, bool value) { add(key, value ? 1 : 0); }
  void add(const std::string& key, double value) {
    std::ostringstream ss;
    ss << std::setprecision(6) << value;
    lines_.push_back(key + "=" + ss.str());
  }
  void witness(const std::string& kind, const std::string& text) {
    blocks_.push_back("begin_witness=" + kind + "\n" + text + "end_witness=" + kind + "\n");
  }
  void print(std::ostream& out) const {
    for (const auto& l : lines_) out << l << "\n";
    for (const auto& b : blocks_) out << b;
  }

 private:
  std::vector<std::string> lines_;
  std::vector<std::string> blocks_;
};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

std::string emit_subspace(const Sheaf& s, const CompartmentalizedSubspace& u) {
  std::ostringstream out;
  for (std::size_t v = 0; v < u.per_vertex.size(); ++v)
    out << "span " << s.base().vertex_name(v) << " " << emit_matrix(transpose(u.per_vertex[v].inclusion()))
        << "\n";
  return out.str();
}

std::string emit_family(const CayleyContext& c, const VertexFamily& fam) {
  std::ostringstream out;
  for (std::size_t v = 0; v < fam.u.size(); ++v) {
    std::vector<std::string> names;
    for (std::size_t g = 0; g < c.order(); ++g)
      if (fam.u[v] >> g & 1) names.push_back(c.group.name(g));
    out << "family " << c.cayley.graph.vertex_name(v) << " {" << join(names, ",") << "}\n";
  }
  return out.str();
}

void add_invariants(Report& r, const Digraph& g, const std::string& prefix = "") {
  const GraphInvariants inv = invariants(g);
  r.add(prefix + "vertices", g.num_vertices());
  r.add(prefix + "edges", g.num_edges());
  r.add(prefix + "h0", inv.h0);
  r.add(prefix + "h1", inv.h1);
  r.add(prefix + "chi", inv.chi);
  r.add(prefix + "rho", inv.rho);
  r.add(prefix + "rho_prime", inv.rho_prime);
}

// Options shared by several commands.
struct Common {
  std::optional<std::uint64_t> prime;  // unset: the file's field or the default
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultEnumerationBudget;

  std::optional<std::uint64_t> prime_override() const {
    if (prime && !is_prime(*prime)) throw InputError(std::to_string(*prime) + " is not a prime");
    return prime;
  }
  PrimeField field(std::uint64_t fallback = kDefaultPrime) const {
    return PrimeField(prime_override().value_or(fallback));
  }
};

Sheaf pulled_back(const Sheaf& s, const std::string& coords_path, Report& r) {
  if (coords_path.empty()) return s;
  const GaloisCover cover = cover_from_coordinates(read_coordinates(coords_path, s.base()));
  r.add("cover_degree", cover.group.order());
  return pullback(cover.projection, s);
}

TwistedBetti twisted_auto(const Sheaf& s, std::size_t samples, std::uint64_t seed, bool exact,
                          std::uint64_t budget, std::string& method) {
  const std::uint64_t deg = std::min(s.total_vdim(), s.total_edim());
  if (!exact && s.field().modulus() > kTwistSafetyFactor * deg) {
    method = "random";
    return twisted_betti(s, samples, seed);
  }
  method = "grid";
  return twisted_betti_exhaustive(s, budget);
}

struct CayleyArgs {
  std::string group = "cyclic:2";
  std::string g1 = "1", g2 = "1";
  std::string subgraph;

  void attach(CLI::App* sub) {
    sub->add_option("--group", group, "cyclic:n, symmetric:n, product:a,b or table:<file>");
    sub->add_option("--g1", g1, "first generator");
    sub->add_option("--g2", g2, "second generator");
    sub->add_option("--subgraph", subgraph, "subgraph L of the Cayley graph (default: all of it)");
  }
  CayleyContext context() const {
    FiniteGroup grp = parse_group_spec(group, fs::current_path());
    const std::size_t a = grp.element(g1), b = grp.element(g2);
    return CayleyContext(std::move(grp), a, b);
  }
  SubgraphMask mask(const CayleyContext& c) const {
    if (subgraph.empty()) return full_mask(c.cayley.graph);
    return mask_from_digraph(c.cayley.graph, read_digraph(subgraph).graph);
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Sheaves on graphs: homology, twisted homology, maximum excess and rho-kernels",
               "sheaflab"};
  app.require_subcommand(1);
  Common common;
  Report report;
  std::function<void()> action;

  auto prime_flag = [&](CLI::App* sub) {
    sub->add_option("--prime", common.prime, "field characteristic");
  };
  auto seed_flag = [&](CLI::App* sub) { sub->add_option("--seed", common.seed, "random seed"); };
  auto budget_flag = [&](CLI::App* sub) {
    sub->add_option("--budget", common.budget, "enumeration budget");
  };

  // invariants
  std::string graph_path;
  std::size_t girth_bound = 0;
  {
    auto* sub = app.add_subcommand("invariants", "h0, h1, chi, rho, rho' and optional girths");
    sub->add_option("graph", graph_path)->required();
    sub->add_option("--girth-bound", girth_bound, "also report girth and Abelian girth up to this length");
    sub->callback([&] {
      action = [&] {
        const Digraph g = read_digraph(graph_path).graph;
        add_invariants(report, g);
        if (girth_bound > 0) {
          const Girths gs = girths(g, girth_bound);
          report.add("girth_bound", girth_bound);
          report.add("girth", gs.girth ? std::to_string(*gs.girth) : "none");
          report.add("abelian_girth", gs.abelian_girth ? std::to_string(*gs.abelian_girth) : "none");
        }
      };
    });
  }

  // fibre
  std::string k_path, l_path;
  bool emit = false;
  {
    auto* sub = app.add_subcommand("fibre", "fibre product of two bigraphs over B2");
    sub->add_option("k", k_path)->required();
    sub->add_option("l", l_path)->required();
    sub->add_flag("--emit", emit, "print the product graph");
    sub->callback([&] {
      action = [&] {
        const Bigraph k = read_digraph(k_path).bigraph(), l = read_digraph(l_path).bigraph();
        const Bigraph p = fibre_product_over_b2(k, l);
        add_invariants(report, p.graph);
        report.add("components", connected_components(p.graph).count);
        if (emit) report.witness("graph", emit_bigraph(p));
      };
    });
  }

  // cover
  std::string coords_path, group_spec;
  {
    auto* sub = app.add_subcommand("cover", "Galois cover from coordinates, verified");
    sub->add_option("base", graph_path)->required();
    auto* c = sub->add_option("--coords", coords_path, "coordinates file");
    sub->add_option("--group", group_spec, "random coordinates in this group")->excludes(c);
    seed_flag(sub);
    sub->add_flag("--emit", emit, "print the total graph");
    sub->callback([&] {
      action = [&] {
        const Digraph base = read_digraph(graph_path).graph;
        GaloisCoordinates coords =
            !coords_path.empty() ? read_coordinates(coords_path, base)
            : !group_spec.empty() ? random_coordinates(base, parse_group_spec(group_spec, fs::current_path()),
                                                       common.seed)
                                  : throw InputError("cover needs --coords or --group");
        const GaloisCover cover = cover_from_coordinates(coords);
        const std::size_t n = cover.group.order();
        report.add("degree", n);
        add_invariants(report, cover.total, "total_");
        report.add("components", connected_components(cover.total).count);
        const std::string bad = galois_violation(cover);
        const GraphInvariants a = invariants(base), b = invariants(cover.total);
        const bool chi_ok = b.chi == static_cast<std::int64_t>(n) * a.chi;
        const bool rho_ok = b.rho == n * a.rho;
        report.add("galois", bad.empty() ? std::string("ok") : bad);
        report.add("chi_scales", chi_ok);
        report.add("rho_scales", rho_ok);
        if (emit) report.witness("graph", emit_digraph(cover.total));
        if (!bad.empty() || !chi_ok || !rho_ok) throw Violation{};
      };
    });
  }

  // normal-ext
  {
    auto* sub = app.add_subcommand("normal-ext", "normal extension of a bigraph viewed as a cover of B2");
    sub->add_option("graph", graph_path)->required();
    sub->add_flag("--emit", emit, "print the total graph");
    sub->callback([&] {
      action = [&] {
        const Bigraph b = read_digraph(graph_path).bigraph();
        const GraphMorphism pi = GraphMorphism::colouring(b);
        if (!is_covering(pi)) throw InputError("the bigraph is not a covering of B2");
        const GaloisCover ext = normal_extension(pi);
        report.add("degree", b.graph.num_vertices());
        report.add("group_order", ext.group.order());
        add_invariants(report, ext.total, "total_");
        report.add("components", connected_components(ext.total).count);
        const std::string bad = galois_violation(ext);
        report.add("galois", bad.empty() ? std::string("ok") : bad);
        if (emit) report.witness("graph", emit_digraph(ext.total));
        if (!bad.empty()) throw Violation{};
      };
    });
  }

  // homology
  std::string sheaf_path;
  {
    auto* sub = app.add_subcommand("homology", "h0, h1 and chi of a sheaf");
    sub->add_option("sheaf", sheaf_path)->required();
    prime_flag(sub);
    sub->callback([&] {
      action = [&] {
        const Sheaf s = read_sheaf(sheaf_path, common.prime_override());
        const HomologySummary h = homology(s);
        report.add("prime", s.field().modulus());
        report.add("h0", h.h0);
        report.add("h1", h.h1);
        report.add("chi", h.chi);
      };
    });
  }

  // twisted
  std::size_t samples = kDefaultTwistSamples;
  bool exact = false;
  {
    auto* sub = app.add_subcommand("twisted", "twisted Betti numbers");
    sub->add_option("sheaf", sheaf_path)->required();
    sub->add_option("--samples", samples, "random twists to try");
    sub->add_flag("--exact", exact, "search the certifying twist grid");
    sub->add_option("--cover", coords_path, "pull back along the cover given by these coordinates");
    prime_flag(sub);
    seed_flag(sub);
    budget_flag(sub);
    sub->callback([&] {
      action = [&] {
        const Sheaf s = pulled_back(read_sheaf(sheaf_path, common.prime_override()), coords_path, report);
        std::string method;
        const TwistedBetti t = twisted_auto(s, samples, common.seed, exact, common.budget, method);
        report.add("prime", s.field().modulus());
        report.add("method", method);
        report.add("h0_twist", t.h0t);
        report.add("h1_twist", t.h1t);
        report.add("rank", t.rank);
        report.add("samples", t.samples);
        report.add("exact", t.exact);
        report.add("failure_bound", t.failure_bound());
      };
    });
  }

  // maxexcess
  std::string method_name = "auto";
  CoverSearchOptions cover_opt;
  {
    auto* sub = app.add_subcommand("maxexcess", "maximum excess of a sheaf");
    sub->add_option("sheaf", sheaf_path)->required();
    sub->add_option("--method", method_name, "brute, edge-simple, pullback or auto");
    sub->add_option("--samples", samples, "random twists for randomized steps");
    sub->add_option("--cover", coords_path, "pull back along the cover given by these coordinates");
    sub->add_option("--max-degree", cover_opt.max_degree, "largest cover degree tried by pullback");
    sub->add_option("--attempts", cover_opt.attempts_per_degree, "random covers per degree");
    prime_flag(sub);
    seed_flag(sub);
    budget_flag(sub);
    sub->callback([&] {
      action = [&] {
        const Sheaf s = pulled_back(read_sheaf(sheaf_path, common.prime_override()), coords_path, report);
        MaxExcessOptions o;
        o.method = parse_excess_method(method_name);
        o.budget = common.budget;
        o.samples = samples;
        o.seed = common.seed;
        o.cover = cover_opt;
        o.cover.seed = common.seed;
        const MaxExcessResult r = max_excess(s, o);
        report.add("prime", s.field().modulus());
        report.add("method", to_string(r.method));
        report.add("budget", common.budget);
        report.add("max_excess", r.value);
        report.add("exact", r.exact);
        if (r.method == ExcessMethod::Brute) report.add("enumerated", r.enumerated);
        if (r.cover) {
          report.add("pullback_degree", r.cover_degree);
          report.add("girth_bound", r.girth_bound);
        }
        if (r.twisted) report.add("h1_twist", r.twisted->h1t);
        if (r.witness) report.witness("subspace", emit_subspace(s, *r.witness));
      };
    });
  }

  // rho-kernel
  CayleyArgs cay;
  std::optional<std::size_t> k_opt;
  std::size_t trials = 1;
  bool check_families = false;
  std::uint64_t family_samples = 0;
  {
    auto* sub = app.add_subcommand("rho-kernel", "rho-kernels of a Cayley bigraph");
    cay.attach(sub);
    sub->add_option("--k", k_opt, "rows of M (default rho(L))");
    sub->add_option("--trials", trials, "Vandermonde matrices to try");
    sub->add_flag("--check-families", check_families, "run the vertex-family criterion");
    sub->add_option("--family-samples", family_samples,
                    "sample this many families when the family space exceeds the budget");
    prime_flag(sub);
    seed_flag(sub);
    budget_flag(sub);
    sub->callback([&] {
      action = [&] {
        const PrimeField f = common.field();
        const CayleyContext c = cay.context();
        const SubgraphMask l = cay.mask(c);
        const OrbitSets gl = orbit_sets(c, l);
        const std::size_t k = k_opt.value_or(gl.rho);
        report.add("group_order", c.order());
        report.add("rho", gl.rho);
        report.add("k", k);
        report.add("prime", f.modulus());
        bool ok = true;
        for (std::size_t t = 0; t < trials; ++t) {
          const Matrix m = vandermonde_totally_independent(k, c.order(), f, derive_seed(common.seed, t));
          const RhoKernel ker = build_kernel(c, l, k, m, f);
          const HomologySummary h = homology(ker.sheaf);
          bool dims = true;
          for (std::size_t v = 0; v < gl.vertex.size(); ++v)
            dims = dims && ker.vertex_value[v].dim() == std::max(gl.vertex[v].size(), k) - k;
          for (std::size_t e = 0; e < gl.edge.size(); ++e)
            dims = dims && ker.edge_value[e].dim() == std::max(gl.edge[e].size(), k) - k;
          const std::string p = "trial" + std::to_string(t) + "_";
          report.add(p + "dims_ok", dims);
          report.add(p + "h0", h.h0);
          report.add(p + "h1", h.h1);
          report.add(p + "chi", h.chi);
          ok = ok && dims;
        }
        if (check_families) {
          FamilyCheckOptions fo;
          fo.budget = common.budget;
          fo.samples_over_budget = family_samples;
          fo.seed = common.seed;
          const FamilyCheck fc = vertex_family_check(c, l, fo);
          report.add("families_hold", fc.holds);
          report.add("families_exhaustive", fc.exhaustive);
          report.add("families", fc.families);
          report.add("families_visited", fc.visited);
          report.add("worst_deficit", fc.worst_deficit);
          if (!fc.holds) report.witness("family", emit_family(c, fc.worst));
          ok = ok && fc.holds;
        }
        if (!ok) throw Violation{};
      };
    });
  }

  // shnc
  {
    auto* sub = app.add_subcommand("shnc", "strengthened Hanna Neumann inequality for two bigraphs");
    sub->add_option("k", k_path)->required();
    sub->add_option("l", l_path)->required();
    sub->add_flag("--emit", emit, "print the product graph");
    sub->callback([&] {
      action = [&] {
        const ShncReport r = shnc_verify(read_digraph(k_path).bigraph(), read_digraph(l_path).bigraph());
        report.add("rho_k", r.rho_k);
        report.add("rho_l", r.rho_l);
        report.add("rho_product", r.rho_product);
        report.add("rho_prime_product", r.rho_prime_product);
        report.add("shnc_margin", r.shnc_margin);
        report.add("hnc_margin", r.hnc_margin);
        if (emit || !r.holds()) report.witness("graph", emit_bigraph(r.product));
        if (!r.holds()) throw Violation{};
      };
    });
  }

  // stallings
  std::string words;
  {
    auto* sub = app.add_subcommand("stallings", "Stallings core of a subgroup of F(a,b)");
    sub->add_option("--words", words, "comma separated words over a, A, b, B")->required();
    sub->callback([&] {
      action = [&] {
        const Bigraph core = stallings_core(parse_words(words));
        add_invariants(report, core.graph);
        report.witness("graph", emit_bigraph(core));
      };
    });
  }

  // generic-exp
  std::vector<std::size_t> ks;
  {
    auto* sub = app.add_subcommand("generic-exp", "maximum excess of random k-th rho-kernels");
    cay.attach(sub);
    sub->add_option("--k", ks, "values of k (default 0..rho(L))");
    sub->add_option("--trials", trials, "matrices per k");
    sub->add_option("--prime", common.prime, "field characteristic (default 3)");
    seed_flag(sub);
    budget_flag(sub);
    sub->callback([&] {
      action = [&] {
        const PrimeField f = common.field(3);
        const CayleyContext c = cay.context();
        const SubgraphMask l = cay.mask(c);
        const std::size_t rho = orbit_sets(c, l).rho;
        if (ks.empty())
          for (std::size_t k = 0; k <= rho; ++k) ks.push_back(k);
        report.add("group_order", c.order());
        report.add("rho", rho);
        report.add("prime", f.modulus());
        GenericOptions go;
        go.trials = trials;
        go.seed = common.seed;
        go.budget = common.budget;
        std::vector<GenericReport> reps;
        bool divisible = true;
        std::size_t certified = 0;
        for (std::size_t k : ks) {
          GenericReport g = generic_excess_experiment(c, l, k, f, go);
          const std::string p = "k" + std::to_string(k) + "_";
          std::vector<std::string> hist;
          for (auto [v, n] : g.histogram) hist.push_back(std::to_string(v) + ":" + std::to_string(n));
          report.add(p + "certified", g.certified);
          report.add(p + "skipped", g.skipped);
          report.add(p + "method", g.method);
          report.add(p + "histogram", hist.empty() ? std::string("none") : join(hist, ","));
          report.add(p + "modal", g.modal ? std::to_string(*g.modal) : "none");
          divisible = divisible && g.all_divisible;
          certified += g.certified;
          reps.push_back(std::move(g));
        }
        const bool chain = modal_chain_ok(reps);
        report.add("all_divisible", divisible);
        report.add("modal_chain", chain);
        if (certified == 0) throw BudgetError("no trial could be certified");
        if (!divisible || !chain) throw Violation{};
      };
    });
  }

  auto fail = [&](const char* kind, const std::string& msg, int code) {
    report.print(out);
    std::string m = msg;
    std::replace(m.begin(), m.end(), '\n', ' ');
    out << "error=" << kind << "\nmessage=" << m << "\n";
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitInput);
  }
  try {
    action();
  } catch (const Violation&) {
    report.print(out);
    out << "error=violation\n";
    return kExitViolation;
  } catch (const InputError& e) {
    return fail("input", e.what(), kExitInput);
  } catch (const BudgetError& e) {
    return fail("budget", e.what(), kExitBudget);
  } catch (const InternalError& e) {
    return fail("internal", e.what(), kExitViolation);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kExitViolation);
  }
  report.print(out);
  return kExitPass;
}

}  // namespace sheaflab
