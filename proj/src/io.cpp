#include "sheaflab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sheaflab/error.hpp"

namespace sheaflab {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> words;
  std::string rest_after(std::size_t n) const;
  std::string raw;
};

std::string Line::rest_after(std::size_t n) const {
  // Re-split the raw text so that matrix literals keep their separators.
  std::istringstream ss(raw);
  std::string w;
  for (std::size_t i = 0; i < n && ss >> w; ++i) {
  }
  std::string rest;
  std::getline(ss, rest);
  return rest;
}

std::vector<Line> lines_of(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ws(raw);
    Line l{number, {}, raw};
    for (std::string w; ws >> w;) l.words.push_back(w);
    if (!l.words.empty()) out.push_back(std::move(l));
  }
  return out;
}

[[noreturn]] void fail(const Line& l, const std::string& what) {
  throw InputError("line " + std::to_string(l.number) + ": " + what);
}

long long parse_int(const Line& l, const std::string& s, const std::string& what) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(l, what + " '" + s + "' is not an integer");
  return v;
}

}  // namespace

bool ParsedGraph::is_bigraph() const {
  for (int c : colour)
    if (c == 0) return false;
  return true;
}

Bigraph ParsedGraph::bigraph() const {
  for (std::size_t e = 0; e < colour.size(); ++e)
    if (colour[e] == 0) throw InputError("edge '" + graph.edge_name(e) + "' has no colour");
  return {graph, colour};
}

ParsedGraph parse_digraph(const std::string& text) {
  ParsedGraph p;
  for (const Line& l : lines_of(text)) {
    const auto& w = l.words;
    if (w[0] == "vertex") {
      if (w.size() != 2) fail(l, "expected 'vertex <id>'");
      if (p.graph.find_vertex(w[1])) fail(l, "duplicate vertex '" + w[1] + "'");
      p.graph.add_vertex(w[1]);
    } else if (w[0] == "edge") {
      if (w.size() != 4 && w.size() != 5) fail(l, "expected 'edge <id> <tail> <head> [colour=1|2]'");
      if (p.graph.find_edge(w[1])) fail(l, "duplicate edge '" + w[1] + "'");
      for (std::size_t i : {2, 3})
        if (!p.graph.find_vertex(w[i])) fail(l, "edge '" + w[1] + "' uses unknown vertex '" + w[i] + "'");
      int colour = 0;
      if (w.size() == 5) {
        if (w[4] == "colour=1") colour = 1;
        else if (w[4] == "colour=2") colour = 2;
        else fail(l, "expected colour=1 or colour=2, got '" + w[4] + "'");
      }
      p.graph.add_edge(w[1], w[2], w[3]);
      p.colour.push_back(colour);
    } else {
      fail(l, "unknown declaration '" + w[0] + "'");
    }
  }
  return p;
}

ParsedGraph read_digraph(const fs::path& path) {
  try {
    return parse_digraph(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string emit_digraph(const Digraph& g, const std::vector<int>& colour) {
  std::ostringstream out;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) out << "vertex " << g.vertex_name(v) << "\n";
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    out << "edge " << g.edge_name(e) << " " << g.vertex_name(g.tail(e)) << " "
        << g.vertex_name(g.head(e));
    if (e < colour.size() && colour[e] != 0) out << " colour=" << colour[e];
    out << "\n";
  }
  return out.str();
}

Matrix parse_matrix(const std::string& literal, const PrimeField& f) {
  std::string s = literal;
  for (char& c : s)
    if (c == '[' || c == ']') c = ' ';
  std::vector<std::vector<Residue>> rows;
  std::istringstream rs(s);
  for (std::string row; std::getline(rs, row, ';');) {
    std::istringstream es(row);
    std::vector<Residue> r;
    for (std::string tok; es >> tok;) {
      long long v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size()) {
        throw InputError("matrix entry '" + tok + "' is not an integer");
      }
      r.push_back(f.reduce(v));
    }
    rows.push_back(std::move(r));
  }
  // "[]" and "[ ]" denote the empty matrix; a lone empty row is dropped.
  if (rows.size() == 1 && rows[0].empty()) rows.clear();
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  std::vector<Residue> data;
  for (const auto& r : rows) {
    if (r.size() != cols) throw InputError("matrix rows have different lengths");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

std::string emit_matrix(const Matrix& m) {
  std::ostringstream out;
  out << "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) out << "; ";
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m(r, c);
  }
  out << "]";
  return out.str();
}

Sheaf parse_sheaf(const std::string& text, const fs::path& base_dir,
                  std::optional<std::uint64_t> prime, const Digraph* graph) {
  const auto lines = lines_of(text);
  std::optional<std::uint64_t> p = prime;
  std::optional<Digraph> g;
  if (graph) g = *graph;
  // Header pass: field and graph may come in any order but before use.
  for (const Line& l : lines) {
    const auto& w = l.words;
    if (w[0] == "field") {
      if (w.size() != 2 || w[1].rfind("p=", 0) != 0) fail(l, "expected 'field p=<prime>'");
      const long long v = parse_int(l, w[1].substr(2), "prime");
      if (v < 2 || !is_prime(static_cast<std::uint64_t>(v))) fail(l, w[1].substr(2) + " is not a prime");
      if (!prime) p = static_cast<std::uint64_t>(v);
    } else if (w[0] == "graph") {
      if (w.size() != 2) fail(l, "expected 'graph <path>'");
      if (!graph) {
        const fs::path path = fs::path(w[1]).is_absolute() ? fs::path(w[1]) : base_dir / w[1];
        g = read_digraph(path).graph;
      }
    }
  }
  if (!g) throw InputError("sheaf file has no 'graph' line");
  const PrimeField f(p.value_or(kDefaultPrime));
  const Digraph& base = *g;

  std::vector<std::size_t> vdim(base.num_vertices(), 0), edim(base.num_edges(), 0);
  std::vector<std::optional<Matrix>> head(base.num_edges()), tail(base.num_edges());
  auto vertex = [&](const Line& l, const std::string& id) {
    auto v = base.find_vertex(id);
    if (!v) fail(l, "unknown vertex '" + id + "'");
    return *v;
  };
  auto edge = [&](const Line& l, const std::string& id) {
    auto e = base.find_edge(id);
    if (!e) fail(l, "unknown edge '" + id + "'");
    return *e;
  };
  auto dim = [&](const Line& l, const std::string& s) {
    const long long d = parse_int(l, s, "dimension");
    if (d < 0) fail(l, "negative dimension " + s);
    return static_cast<std::size_t>(d);
  };
  for (const Line& l : lines) {
    const auto& w = l.words;
    if (w[0] == "field" || w[0] == "graph") continue;
    if (w[0] == "structure") {
      if (w.size() != 1) fail(l, "'structure' takes no arguments");
      std::fill(vdim.begin(), vdim.end(), 1);
      std::fill(edim.begin(), edim.end(), 1);
      for (std::size_t e = 0; e < base.num_edges(); ++e) head[e] = tail[e] = Matrix::identity(1);
    } else if (w[0] == "vdim") {
      if (w.size() != 3) fail(l, "expected 'vdim <vertex> <d>'");
      vdim[vertex(l, w[1])] = dim(l, w[2]);
    } else if (w[0] == "edim") {
      if (w.size() != 3) fail(l, "expected 'edim <edge> <d>'");
      edim[edge(l, w[1])] = dim(l, w[2]);
    } else if (w[0] == "head" || w[0] == "tail") {
      if (w.size() < 2) fail(l, "expected '" + w[0] + " <edge> <matrix>'");
      const std::size_t e = edge(l, w[1]);
      try {
        (w[0] == "head" ? head : tail)[e] = parse_matrix(l.rest_after(2), f);
      } catch (const InputError& err) {
        fail(l, err.what());
      }
    } else {
      fail(l, "unknown declaration '" + w[0] + "'");
    }
  }
  std::vector<Matrix> hs, ts;
  for (std::size_t e = 0; e < base.num_edges(); ++e) {
    const std::size_t hr = vdim[base.head(e)], tr = vdim[base.tail(e)], c = edim[e];
    auto take = [&](std::optional<Matrix>& m, std::size_t rows, const char* which) {
      if (!m) {
        if (rows == 0 || c == 0) return Matrix(rows, c);
        throw InputError(std::string(which) + " map of edge '" + base.edge_name(e) +
                         "' is missing; expected " + std::to_string(rows) + "x" + std::to_string(c));
      }
      // An empty literal stands for any shape with a zero side.
      if (m->rows() == 0 && m->cols() == 0 && (rows == 0 || c == 0)) return Matrix(rows, c);
      return *m;
    };
    hs.push_back(take(head[e], hr, "head"));
    ts.push_back(take(tail[e], tr, "tail"));
  }
  return Sheaf(base, f, std::move(vdim), std::move(edim), std::move(hs), std::move(ts));
}

Sheaf read_sheaf(const fs::path& path, std::optional<std::uint64_t> prime) {
  try {
    return parse_sheaf(read_text_file(path), path.parent_path(), prime);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string emit_sheaf(const Sheaf& s, const std::string& graph_path) {
  std::ostringstream out;
  const Digraph& g = s.base();
  out << "field p=" << s.field().modulus() << "\n";
  out << "graph " << graph_path << "\n";
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    out << "vdim " << g.vertex_name(v) << " " << s.vdim(v) << "\n";
  for (std::size_t e = 0; e < g.num_edges(); ++e) out << "edim " << g.edge_name(e) << " " << s.edim(e) << "\n";
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    out << "head " << g.edge_name(e) << " " << emit_matrix(s.head(e)) << "\n";
    out << "tail " << g.edge_name(e) << " " << emit_matrix(s.tail(e)) << "\n";
  }
  return out.str();
}

FiniteGroup parse_group_spec(const std::string& spec, const fs::path& base_dir) {
  if (spec.rfind("table:", 0) == 0) {
    const fs::path path = fs::path(spec.substr(6)).is_absolute() ? fs::path(spec.substr(6))
                                                                 : base_dir / spec.substr(6);
    return group_from_table_text(read_text_file(path));
  }
  return group_from_spec(spec);
}

GaloisCoordinates parse_coordinates(const std::string& text, const Digraph& base,
                                    const fs::path& base_dir) {
  std::optional<FiniteGroup> group;
  std::vector<std::optional<std::size_t>> a(base.num_edges());
  for (const Line& l : lines_of(text)) {
    const auto& w = l.words;
    if (w[0] == "group") {
      if (w.size() != 2) fail(l, "expected 'group <spec>'");
      if (group) fail(l, "second 'group' line");
      try {
        group = parse_group_spec(w[1], base_dir);
      } catch (const InputError& err) {
        fail(l, err.what());
      }
    } else if (w[0] == "coord") {
      if (!group) fail(l, "'coord' before 'group'");
      if (w.size() != 3) fail(l, "expected 'coord <edge> <element>'");
      auto e = base.find_edge(w[1]);
      if (!e) fail(l, "unknown edge '" + w[1] + "'");
      if (a[*e]) fail(l, "edge '" + w[1] + "' has two coordinates");
      try {
        a[*e] = group->element(w[2]);
      } catch (const InputError& err) {
        fail(l, err.what());
      }
    } else {
      fail(l, "unknown declaration '" + w[0] + "'");
    }
  }
  if (!group) throw InputError("coordinates file has no 'group' line");
  GaloisCoordinates c{base, *group, {}};
  for (std::size_t e = 0; e < a.size(); ++e) {
    if (!a[e]) throw InputError("edge '" + base.edge_name(e) + "' has no coordinate");
    c.a.push_back(*a[e]);
  }
  return c;
}

GaloisCoordinates read_coordinates(const fs::path& path, const Digraph& base) {
  try {
    return parse_coordinates(read_text_file(path), base, path.parent_path());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string emit_coordinates(const GaloisCoordinates& c, const std::string& group_spec) {
  std::ostringstream out;
  out << "group " << group_spec << "\n";
  for (std::size_t e = 0; e < c.a.size(); ++e)
    out << "coord " << c.base.edge_name(e) << " " << c.group.name(c.a[e]) << "\n";
  return out.str();
}

}  // namespace sheaflab
