#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "hitwalk/graph.hpp"

namespace hitwalk {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Text format: first line "n m", then m lines "u v" with 0 <= u < v < n.
inline void save_edge_list(const Graph& g, std::ostream& out) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (Vertex u = 0; u < g.vertex_count(); ++u)
    for (Vertex v : g.neighbors(u))
      if (v > u) out << u << ' ' << v << '\n';
}

inline void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  save_edge_list(g, out);
}

inline Graph load_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(1, "missing header");
  std::uint64_t n = 0, m = 0;
  {
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> n >> m) || (ss >> extra))
      throw ParseError(lineno, "malformed header, expected \"n m\"");
  }
  if (n == 0) throw ParseError(lineno, "vertex count must be positive");

  std::vector<Edge> edges;
  edges.reserve(m);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!next_line()) throw ParseError(lineno + 1, "unexpected end of input");
    std::istringstream ss(line);
    std::uint64_t u = 0, v = 0;
    std::string extra;
    if (!(ss >> u >> v) || (ss >> extra))
      throw ParseError(lineno, "malformed edge line");
    if (u >= n || v >= n) throw ParseError(lineno, "vertex index out of range");
    if (u == v) throw ParseError(lineno, "self-loop");
    if (u > v) std::swap(u, v);
    if (!seen.insert(u * n + v).second) throw ParseError(lineno, "duplicate edge");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (next_line()) throw ParseError(lineno, "trailing content after edge list");
  return Graph::from_edges(n, edges);
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return load_edge_list(in);
}

}  // namespace hitwalk
