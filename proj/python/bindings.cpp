#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sheaflab/cli.hpp"
#include "sheaflab/error.hpp"
#include "sheaflab/excess.hpp"
#include "sheaflab/io.hpp"
#include "sheaflab/rho.hpp"
#include "sheaflab/twisted.hpp"

namespace py = pybind11;
using namespace sheaflab;

namespace {

py::dict invariants_dict(const Digraph& g) {
  const GraphInvariants inv = invariants(g);
  py::dict d;
  d["vertices"] = g.num_vertices();
  d["edges"] = g.num_edges();
  d["h0"] = inv.h0;
  d["h1"] = inv.h1;
  d["chi"] = inv.chi;
  d["rho"] = inv.rho;
  d["rho_prime"] = inv.rho_prime;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sheaves on graphs over prime fields";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_AssertionError);

  m.attr("DEFAULT_PRIME") = kDefaultPrime;

  py::class_<ParsedGraph>(m, "Graph")
      .def_static("parse", &parse_digraph, py::arg("text"))
      .def_static("load", [](const std::string& path) { return read_digraph(path); }, py::arg("path"))
      .def_property_readonly("num_vertices", [](const ParsedGraph& p) { return p.graph.num_vertices(); })
      .def_property_readonly("num_edges", [](const ParsedGraph& p) { return p.graph.num_edges(); })
      .def_property_readonly("is_bigraph", &ParsedGraph::is_bigraph)
      .def("invariants", [](const ParsedGraph& p) { return invariants_dict(p.graph); })
      .def("emit", [](const ParsedGraph& p) { return emit_digraph(p.graph, p.colour); })
      .def("__repr__", [](const ParsedGraph& p) {
        return "<Graph " + std::to_string(p.graph.num_vertices()) + " vertices, " +
               std::to_string(p.graph.num_edges()) + " edges>";
      });

  py::class_<Sheaf>(m, "Sheaf")
      .def_static("load", [](const std::string& path, std::optional<std::uint64_t> prime) {
        return read_sheaf(path, prime);
      }, py::arg("path"), py::arg("prime") = py::none())
      .def_static("parse", [](const std::string& text, const ParsedGraph& g, std::optional<std::uint64_t> prime) {
        return parse_sheaf(text, ".", prime, &g.graph);
      }, py::arg("text"), py::arg("graph"), py::arg("prime") = py::none())
      .def_static("structure", [](const ParsedGraph& g, std::uint64_t p) {
        return structure_sheaf(g.graph, PrimeField(p));
      }, py::arg("graph"), py::arg("prime") = kDefaultPrime)
      .def_property_readonly("prime", [](const Sheaf& s) { return s.field().modulus(); })
      .def("homology", [](const Sheaf& s) {
        const HomologySummary h = homology(s);
        py::dict d;
        d["h0"] = h.h0;
        d["h1"] = h.h1;
        d["chi"] = h.chi;
        return d;
      })
      .def("twisted_betti", [](const Sheaf& s, std::size_t samples, std::uint64_t seed, bool exact) {
        const TwistedBetti t = exact ? twisted_betti_exhaustive(s) : twisted_betti(s, samples, seed);
        py::dict d;
        d["h0_twist"] = t.h0t;
        d["h1_twist"] = t.h1t;
        d["exact"] = t.exact;
        d["failure_bound"] = t.failure_bound();
        return d;
      }, py::arg("samples") = kDefaultTwistSamples, py::arg("seed") = 0, py::arg("exact") = false)
      .def("max_excess", [](const Sheaf& s, const std::string& method, std::uint64_t budget, std::uint64_t seed) {
        MaxExcessOptions o;
        o.method = parse_excess_method(method);
        o.budget = budget;
        o.seed = seed;
        o.cover.seed = seed;
        const MaxExcessResult r = max_excess(s, o);
        py::dict d;
        d["value"] = r.value;
        d["method"] = to_string(r.method);
        d["exact"] = r.exact;
        return d;
      }, py::arg("method") = "auto", py::arg("budget") = kDefaultEnumerationBudget, py::arg("seed") = 0)
      .def("emit", &emit_sheaf, py::arg("graph_path"));

  m.def("stallings_core", [](const std::string& words) {
    ParsedGraph p;
    Bigraph b = stallings_core(parse_words(words));
    p.graph = b.graph;
    p.colour = b.colour;
    return p;
  }, py::arg("words"));

  m.def("shnc", [](const ParsedGraph& k, const ParsedGraph& l) {
    const ShncReport r = shnc_verify(k.bigraph(), l.bigraph());
    py::dict d;
    d["rho_k"] = r.rho_k;
    d["rho_l"] = r.rho_l;
    d["rho_product"] = r.rho_product;
    d["shnc_margin"] = r.shnc_margin;
    d["hnc_margin"] = r.hnc_margin;
    return d;
  }, py::arg("k"), py::arg("l"));

  // Same commands and reports as the sheaflab executable.
  m.def("run", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    const int code = run_cli(args, out);
    return py::make_tuple(code, out.str());
  }, py::arg("args"));
}
