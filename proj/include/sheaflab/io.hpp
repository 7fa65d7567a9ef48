#pragma once

// Text formats.
//
//   graph:        vertex <id> | edge <id> <tail> <head> [colour=1|2] | # comment
//   sheaf:        field p=<prime> | graph <path> | structure | vdim <v> <d> |
//                 edim <e> <d> | head <e> <matrix> | tail <e> <matrix>
//   coordinates:  group <spec> | coord <edge> <element>
//   matrix:       rows separated by ';', entries by spaces, optional [ ];
//                 integers reduced mod p.
//
// Relative paths inside a file are resolved against that file's directory.
// Every parse error is an InputError that names the line.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sheaflab/galois.hpp"
#include "sheaflab/sheaf.hpp"

namespace sheaflab {

std::string read_text_file(const std::filesystem::path& path);

struct ParsedGraph {
  Digraph graph;
  std::vector<int> colour;  // 0 for uncoloured edges
  bool is_bigraph() const;
  Bigraph bigraph() const;  // InputError unless every edge is coloured
};

ParsedGraph parse_digraph(const std::string& text);
ParsedGraph read_digraph(const std::filesystem::path& path);
std::string emit_digraph(const Digraph& g, const std::vector<int>& colour = {});
inline std::string emit_bigraph(const Bigraph& b) { return emit_digraph(b.graph, b.colour); }

Matrix parse_matrix(const std::string& literal, const PrimeField& f);
// "[a b; c d]", or "[]" for an empty matrix.
std::string emit_matrix(const Matrix& m);

// `prime`, when set, overrides the file's field line. The graph line is
// resolved with `base_dir`; `graph`, when given, is used instead.
Sheaf parse_sheaf(const std::string& text, const std::filesystem::path& base_dir,
                  std::optional<std::uint64_t> prime = std::nullopt,
                  const Digraph* graph = nullptr);
Sheaf read_sheaf(const std::filesystem::path& path, std::optional<std::uint64_t> prime = std::nullopt);
std::string emit_sheaf(const Sheaf& s, const std::string& graph_path);

FiniteGroup parse_group_spec(const std::string& spec, const std::filesystem::path& base_dir);
GaloisCoordinates parse_coordinates(const std::string& text, const Digraph& base,
                                    const std::filesystem::path& base_dir);
GaloisCoordinates read_coordinates(const std::filesystem::path& path, const Digraph& base);
std::string emit_coordinates(const GaloisCoordinates& c, const std::string& group_spec);

}  // namespace sheaflab
