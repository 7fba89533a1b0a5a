#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ecml/error.hpp"

namespace ecml {

using VertexId = int;
using EdgeId = int;

struct Edge {
  VertexId u;
  VertexId v;  // head when the graph is directed
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  EdgeId edge;
  VertexId other;
};

// Simple (di)graph with dense ids. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  Graph(int num_vertices, std::vector<Edge> edges, bool directed = false)
      : directed_(directed), n_(num_vertices), edges_(std::move(edges)), incidence_(num_vertices) {
    if (num_vertices < 0) throw Error("negative vertex count");
    std::set<std::pair<VertexId, VertexId>> seen;
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges_.size()); ++e) {
      auto [u, v] = edges_[e];
      if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw Error("edge " + std::to_string(e) + " references a vertex out of range");
      if (u == v) throw Error("self-loop at vertex " + std::to_string(u));
      auto key = directed_ ? std::pair{u, v} : std::pair{std::min(u, v), std::max(u, v)};
      if (!seen.insert(key).second) throw Error("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
      incidence_[u].push_back({e, v});
      incidence_[v].push_back({e, u});
    }
  }

  bool directed() const { return directed_; }
  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Incidence>& incident(VertexId v) const { return incidence_[v]; }
  int degree(VertexId v) const { return static_cast<int>(incidence_[v].size()); }

  std::optional<EdgeId> find_edge(VertexId u, VertexId v) const {
    for (auto [e, w] : incidence_[u])
      if (w == v && (!directed_ || edges_[e].u == u)) return e;
    return std::nullopt;
  }

  // Names from the input file, reporting only. Empty when ids were numeric.
  std::vector<std::string> names;

 private:
  bool directed_ = false;
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> incidence_;
};

// Membership masks over vertex / edge ids.
struct VertexSet {
  std::vector<bool> bits;
  bool contains(VertexId v) const { return bits[v]; }
  int size() const { return static_cast<int>(std::count(bits.begin(), bits.end(), true)); }
  static VertexSet of(int n, std::initializer_list<VertexId> members = {}) {
    VertexSet s{std::vector<bool>(n, false)};
    for (auto v : members) s.bits.at(v) = true;
    return s;
  }
  friend bool operator==(const VertexSet&, const VertexSet&) = default;
};

struct EdgeSet {
  std::vector<bool> bits;
  bool contains(EdgeId e) const { return bits[e]; }
  int size() const { return static_cast<int>(std::count(bits.begin(), bits.end(), true)); }
  static EdgeSet of(int m, std::initializer_list<EdgeId> members = {}) {
    EdgeSet s{std::vector<bool>(m, false)};
    for (auto e : members) s.bits.at(e) = true;
    return s;
  }
  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;
};

// (G, FX, FY, k): fixed sets and parameters appear in the order the paired
// ProblemSpec declares them.
struct Instance {
  Graph graph;
  std::vector<VertexSet> fixed_vertex_sets;
  std::vector<EdgeSet> fixed_edge_sets;
  std::vector<std::int64_t> params;
};

namespace detail {

struct UnionFind {
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<int> parent;
};

}  // namespace detail

// cc(X) for a vertex set: components of G[X]; directed graphs use the underlying undirected graph.
inline int connected_components(const Graph& g, const VertexSet& x) {
  if (static_cast<int>(x.bits.size()) != g.num_vertices()) throw Error("vertex set has wrong length");
  detail::UnionFind uf(g.num_vertices());
  int comps = x.size();
  for (const auto& [u, v] : g.edges())
    if (x.bits[u] && x.bits[v] && uf.unite(u, v)) --comps;
  return comps;
}

// cc(Y) for an edge set: components of (V(Y), Y). Vertices outside V(Y) do not count.
inline int connected_components(const Graph& g, const EdgeSet& y) {
  if (static_cast<int>(y.bits.size()) != g.num_edges()) throw Error("edge set has wrong length");
  detail::UnionFind uf(g.num_vertices());
  std::vector<bool> touched(g.num_vertices(), false);
  int comps = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!y.bits[e]) continue;
    auto [u, v] = g.edge(e);
    for (auto w : {u, v})
      if (!touched[w]) touched[w] = true, ++comps;
    if (uf.unite(u, v)) --comps;
  }
  return comps;
}

enum class GraphFormat { EdgeList, PaceGr };

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline std::optional<long long> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  try {
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

inline Graph parse_pace_gr(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::optional<std::pair<long long, long long>> header;
  bool directed = false;
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "p") {
      if (header) throw ParseError(lineno, "duplicate header");
      if (tok.size() != 4 || (tok[1] != "tw" && tok[1] != "dtw"))
        throw ParseError(lineno, "expected 'p tw <n> <m>' or 'p dtw <n> <m>'");
      auto n = parse_int(tok[2]), m = parse_int(tok[3]);
      if (!n || !m || *n < 0 || *m < 0) throw ParseError(lineno, "bad header counts");
      header = {*n, *m};
      directed = tok[1] == "dtw";
      continue;
    }
    if (!header) throw ParseError(lineno, "edge line before header");
    if (tok.size() != 2) throw ParseError(lineno, "expected 'u v'");
    auto a = parse_int(tok[0]), b = parse_int(tok[1]);
    if (!a || !b) throw ParseError(lineno, "non-integer vertex id");
    if (*a < 1 || *a > header->first || *b < 1 || *b > header->first)
      throw ParseError(lineno, "vertex id out of range");
    if (*a == *b) throw ParseError(lineno, "self-loop");
    int u = static_cast<int>(*a - 1), v = static_cast<int>(*b - 1);
    auto key = directed ? std::pair{u, v} : std::pair{std::min(u, v), std::max(u, v)};
    if (!seen.insert(key).second) throw ParseError(lineno, "duplicate edge");
    edges.push_back({u, v});
  }
  if (!header) throw ParseError(0, "missing 'p tw' header");
  if (static_cast<long long>(edges.size()) != header->second)
    throw ParseError(lineno, "header announces " + std::to_string(header->second) + " edges, found " +
                                 std::to_string(edges.size()));
  return Graph(static_cast<int>(header->first), std::move(edges), directed);
}

// Edge list: '#' comments, optional "directed"/"undirected" directive, lines
// "a b" (edge, names arbitrary) or "a" (isolated vertex). Ids follow first appearance.
inline Graph parse_edge_list(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool directed = false, seen_edge = false;
  std::map<std::string, int> ids;
  std::vector<std::string> names;
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> seen;
  auto id_of = [&](const std::string& name) {
    auto [it, fresh] = ids.emplace(name, static_cast<int>(names.size()));
    if (fresh) names.push_back(name);
    return it->second;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() == 1 && (tok[0] == "directed" || tok[0] == "undirected")) {
      if (seen_edge || !names.empty()) throw ParseError(lineno, "directive must precede all vertices");
      directed = tok[0] == "directed";
      continue;
    }
    if (tok.size() == 1) {
      id_of(tok[0]);
      continue;
    }
    if (tok.size() != 2) throw ParseError(lineno, "expected 'u v'");
    if (tok[0] == tok[1]) throw ParseError(lineno, "self-loop");
    int u = id_of(tok[0]), v = id_of(tok[1]);
    auto key = directed ? std::pair{u, v} : std::pair{std::min(u, v), std::max(u, v)};
    if (!seen.insert(key).second) throw ParseError(lineno, "duplicate edge");
    edges.push_back({u, v});
    seen_edge = true;
  }
  Graph g(static_cast<int>(names.size()), std::move(edges), directed);
  g.names = std::move(names);
  return g;
}

}  // namespace detail

inline Graph parse_graph(std::istream& in, GraphFormat format) {
  return format == GraphFormat::PaceGr ? detail::parse_pace_gr(in) : detail::parse_edge_list(in);
}

inline Graph parse_graph(const std::string& text, GraphFormat format) {
  std::istringstream in(text);
  return parse_graph(in, format);
}

inline std::string write_pace_gr(const Graph& g) {
  std::ostringstream out;
  out << "p " << (g.directed() ? "dtw" : "tw") << ' ' << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& [u, v] : g.edges()) out << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

}  // namespace ecml
