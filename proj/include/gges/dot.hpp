#ifndef GGES_DOT_HPP
#define GGES_DOT_HPP

#include <iosfwd>
#include <string>
#include <string_view>

#include "gges/graph.hpp"

namespace gges {

// DOT dialect:
//
//   digraph g {
//     "a";
//     "a" -> "b";
//     "b" -> "c" [dir=none];
//   }
//
// Nodes are declared in index order, edges follow in lexicographic order.
// Names are quoted verbatim and may not contain '"' or line breaks.

std::string to_dot(const Pattern &pattern);
std::string to_dot(const Dag &dag);

/// Parses exactly the dialect above. Nodes referenced only by edges are
/// appended in order of first appearance. Throws ParseError.
Pattern parse_dot(std::string_view text);

/// Like parse_dot, but rejects undirected edges.
Dag parse_dot_dag(std::string_view text);

Pattern read_dot_file(const std::string &path);

}  // namespace gges

#endif  // GGES_DOT_HPP
