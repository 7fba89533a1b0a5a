#pragma once

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ecml/error.hpp"
#include "ecml/graph.hpp"

namespace ecml {

struct TreeDecomposition {
  std::vector<std::vector<VertexId>> bags;      // each sorted, duplicate-free
  std::vector<std::pair<int, int>> tree_edges;  // over bag indices

  int width() const {
    std::size_t w = 0;
    for (const auto& b : bags) w = std::max(w, b.size());
    return static_cast<int>(w) - 1;
  }
};

struct Violation {
  enum class Kind { BadVertex, NotATree, UncoveredVertex, UncoveredEdge, DisconnectedOccurrence };
  Kind kind;
  std::string message;
  std::vector<int> witness;  // vertex/edge ids or bag ids depending on kind
};

struct ValidationReport {
  std::vector<Violation> violations;
  int width = -1;
  bool valid() const { return violations.empty(); }
};

inline ValidationReport validate_decomposition(const Graph& g, const TreeDecomposition& td) {
  ValidationReport report;
  report.width = td.width();
  const int nb = static_cast<int>(td.bags.size());
  const int n = g.num_vertices();
  auto add = [&](Violation::Kind k, std::string msg, std::vector<int> w) {
    report.violations.push_back({k, std::move(msg), std::move(w)});
  };

  std::vector<std::vector<int>> occurs(n);
  for (int b = 0; b < nb; ++b)
    for (auto v : td.bags[b]) {
      if (v < 0 || v >= n) {
        add(Violation::Kind::BadVertex, "bag " + std::to_string(b) + " has vertex out of range", {b, v});
        continue;
      }
      occurs[v].push_back(b);
    }

  // Tree shape: nb-1 edges, connected, in range.
  std::vector<std::vector<int>> adj(nb);
  bool edges_ok = true;
  for (auto [a, b] : td.tree_edges) {
    if (a < 0 || a >= nb || b < 0 || b >= nb || a == b) {
      add(Violation::Kind::NotATree, "tree edge out of range or loop", {a, b});
      edges_ok = false;
      continue;
    }
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  if (edges_ok && nb > 0) {
    detail::UnionFind uf(nb);
    bool cycle = false;
    int comps = nb;
    for (auto [a, b] : td.tree_edges) {
      if (uf.unite(a, b)) --comps;
      else cycle = true;
    }
    if (cycle || comps != 1) add(Violation::Kind::NotATree, "decomposition tree is not a tree", {});
  }

  for (VertexId v = 0; v < n; ++v)
    if (occurs[v].empty()) add(Violation::Kind::UncoveredVertex, "vertex " + std::to_string(v) + " in no bag", {v});

  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    auto [u, v] = g.edge(e);
    bool covered = false;
    for (auto b : occurs[u])
      if (std::binary_search(td.bags[b].begin(), td.bags[b].end(), v)) {
        covered = true;
        break;
      }
    if (!covered)
      add(Violation::Kind::UncoveredEdge,
          "edge " + std::to_string(e) + " (" + std::to_string(u) + "," + std::to_string(v) + ") in no bag", {e, u, v});
  }

  // Occurrences of each vertex must induce a connected subtree.
  if (edges_ok) {
    for (VertexId v = 0; v < n; ++v) {
      if (occurs[v].size() < 2) continue;
      std::set<int> holders(occurs[v].begin(), occurs[v].end());
      std::set<int> reached{occurs[v][0]};
      std::vector<int> stack{occurs[v][0]};
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x])
          if (holders.count(y) && reached.insert(y).second) stack.push_back(y);
      }
      if (reached.size() != holders.size()) {
        std::vector<int> w{v};
        for (int b : holders)
          if (!reached.count(b)) w.push_back(b);
        add(Violation::Kind::DisconnectedOccurrence,
            "bags containing vertex " + std::to_string(v) + " are not connected", std::move(w));
      }
    }
  }
  return report;
}

enum class NiceKind { Leaf, IntroduceVertex, IntroduceEdge, Forget, Join };

inline const char* to_string(NiceKind k) {
  switch (k) {
    case NiceKind::Leaf: return "leaf";
    case NiceKind::IntroduceVertex: return "introduce_vertex";
    case NiceKind::IntroduceEdge: return "introduce_edge";
    case NiceKind::Forget: return "forget";
    case NiceKind::Join: return "join";
  }
  return "?";
}

struct NiceNode {
  NiceKind kind = NiceKind::Leaf;
  VertexId vertex = -1;  // introduce-vertex / forget
  EdgeId edge = -1;      // introduce-edge
  std::vector<int> children;
  std::vector<VertexId> bag;  // sorted
  friend bool operator==(const NiceNode&, const NiceNode&) = default;
};

// Children always precede parents in `nodes`; the root is the last node.
struct NiceDecomposition {
  std::vector<NiceNode> nodes;
  int root = -1;

  int width() const {
    std::size_t w = 0;
    for (const auto& x : nodes) w = std::max(w, x.bag.size());
    return static_cast<int>(w) - 1;
  }
  friend bool operator==(const NiceDecomposition&, const NiceDecomposition&) = default;
};

namespace detail {

class NiceBuilder {
 public:
  NiceBuilder(const Graph& g, const TreeDecomposition& td) : g_(g), td_(td), introduced_(g.num_edges(), false) {}

  NiceDecomposition build() {
    if (td_.bags.empty()) {
      if (g_.num_vertices() != 0) throw Error("empty decomposition for a nonempty graph");
      push({NiceKind::Leaf, -1, -1, {}, {}});
      out_.root = 0;
      return std::move(out_);
    }
    const int nb = static_cast<int>(td_.bags.size());
    adj_.assign(nb, {});
    for (auto [a, b] : td_.tree_edges) {
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    // Iterative post-order from bag 0 to keep deep path decompositions off the call stack.
    std::vector<int> parent(nb, -1), order;
    std::vector<bool> seen(nb, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      order.push_back(x);
      for (int y : adj_[x])
        if (!seen[y]) seen[y] = true, parent[y] = x, stack.push_back(y);
    }
    std::vector<int> top(nb, -1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int x = *it;
      const auto& bag = td_.bags[x];
      std::vector<int> pending;
      for (int y : adj_[x])
        if (y != parent[x]) pending.push_back(transition(top[y], bag));
      if (pending.empty()) {
        int leaf = push({NiceKind::Leaf, -1, -1, {}, {}});
        pending.push_back(transition(leaf, bag));
      }
      int cur = pending[0];
      for (std::size_t i = 1; i < pending.size(); ++i)
        cur = push({NiceKind::Join, -1, -1, {cur, pending[i]}, std::vector<VertexId>(bag)});
      top[x] = cur;
    }
    out_.root = transition(top[0], {});
    for (EdgeId e = 0; e < g_.num_edges(); ++e)
      if (!introduced_[e]) throw Error("decomposition does not cover edge " + std::to_string(e));
    return std::move(out_);
  }

 private:
  int push(NiceNode node) {
    out_.nodes.push_back(std::move(node));
    return static_cast<int>(out_.nodes.size()) - 1;
  }

  // Walk from node `from` (bag = its bag) to a node whose bag is `target`:
  // forget the surplus vertices in id order, each preceded by its pending edges, then introduce.
  int transition(int from, const std::vector<VertexId>& target) {
    std::vector<VertexId> bag = out_.nodes[from].bag;
    int cur = from;
    std::vector<VertexId> leaving, entering;
    std::set_difference(bag.begin(), bag.end(), target.begin(), target.end(), std::back_inserter(leaving));
    std::set_difference(target.begin(), target.end(), bag.begin(), bag.end(), std::back_inserter(entering));
    for (VertexId v : leaving) {
      for (auto [e, w] : g_.incident(v)) {
        if (introduced_[e]) continue;
        if (!std::binary_search(bag.begin(), bag.end(), w))
          throw Error("invalid decomposition: edge " + std::to_string(e) + " not covered when forgetting " +
                      std::to_string(v));
        introduced_[e] = true;
        cur = push({NiceKind::IntroduceEdge, -1, e, {cur}, bag});
      }
      bag.erase(std::lower_bound(bag.begin(), bag.end(), v));
      cur = push({NiceKind::Forget, v, -1, {cur}, bag});
    }
    for (VertexId v : entering) {
      bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
      cur = push({NiceKind::IntroduceVertex, v, -1, {cur}, bag});
    }
    return cur;
  }

  const Graph& g_;
  const TreeDecomposition& td_;
  std::vector<std::vector<int>> adj_;
  std::vector<bool> introduced_;
  NiceDecomposition out_;
};

}  // namespace detail

// Root: bag 0, then forget chain to the empty root. Each edge is introduced
// immediately below the forget of whichever endpoint leaves first (ties by id).
inline NiceDecomposition make_nice(const Graph& g, const TreeDecomposition& td) {
  auto report = validate_decomposition(g, td);
  if (!report.valid()) throw Error("invalid tree decomposition: " + report.violations.front().message);
  return detail::NiceBuilder(g, td).build();
}

// Shape audit for nice decompositions; returns human-readable problems, empty when nice.
inline std::vector<std::string> check_nice(const Graph& g, const NiceDecomposition& nd) {
  std::vector<std::string> issues;
  auto bad = [&](int x, const std::string& what) { issues.push_back("node " + std::to_string(x) + ": " + what); };
  const int nn = static_cast<int>(nd.nodes.size());
  if (nd.root < 0 || nd.root >= nn) return {"root out of range"};
  if (!nd.nodes[nd.root].bag.empty()) bad(nd.root, "root bag not empty");
  std::vector<int> introduced(g.num_edges(), 0);
  std::vector<int> parents(nn, 0);
  for (int x = 0; x < nn; ++x) {
    const auto& node = nd.nodes[x];
    if (!std::is_sorted(node.bag.begin(), node.bag.end())) bad(x, "bag not sorted");
    for (int c : node.children) {
      if (c < 0 || c >= x) {
        bad(x, "child index must precede parent");
        continue;
      }
      ++parents[c];
    }
    auto child_bag = [&](int i) -> const std::vector<VertexId>& { return nd.nodes[node.children[i]].bag; };
    auto arity = [&](std::size_t k) {
      if (node.children.size() != k) bad(x, "wrong number of children");
      return node.children.size() == k && std::all_of(node.children.begin(), node.children.end(),
                                                       [&](int c) { return c >= 0 && c < x; });
    };
    switch (node.kind) {
      case NiceKind::Leaf:
        arity(0);
        if (!node.bag.empty()) bad(x, "leaf bag not empty");
        break;
      case NiceKind::IntroduceVertex: {
        if (!arity(1)) break;
        auto b = child_bag(0);
        if (std::binary_search(b.begin(), b.end(), node.vertex)) bad(x, "introduced vertex already in child");
        b.insert(std::lower_bound(b.begin(), b.end(), node.vertex), node.vertex);
        if (b != node.bag) bad(x, "introduce bag mismatch");
        break;
      }
      case NiceKind::Forget: {
        if (!arity(1)) break;
        auto b = child_bag(0);
        auto it = std::lower_bound(b.begin(), b.end(), node.vertex);
        if (it == b.end() || *it != node.vertex) {
          bad(x, "forgotten vertex not in child");
          break;
        }
        b.erase(it);
        if (b != node.bag) bad(x, "forget bag mismatch");
        break;
      }
      case NiceKind::IntroduceEdge: {
        if (!arity(1)) break;
        if (child_bag(0) != node.bag) bad(x, "introduce-edge changes the bag");
        if (node.edge < 0 || node.edge >= g.num_edges()) {
          bad(x, "edge id out of range");
          break;
        }
        ++introduced[node.edge];
        auto [u, v] = g.edge(node.edge);
        if (!std::binary_search(node.bag.begin(), node.bag.end(), u) ||
            !std::binary_search(node.bag.begin(), node.bag.end(), v))
          bad(x, "edge endpoint missing from bag");
        break;
      }
      case NiceKind::Join:
        if (!arity(2)) break;
        if (child_bag(0) != node.bag || child_bag(1) != node.bag) bad(x, "join bags differ");
        break;
    }
  }
  for (int x = 0; x < nn; ++x)
    if (x != nd.root && parents[x] != 1) bad(x, "node has " + std::to_string(parents[x]) + " parents");
  if (parents[nd.root] != 0) bad(nd.root, "root has a parent");
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (introduced[e] != 1)
      issues.push_back("edge " + std::to_string(e) + " introduced " + std::to_string(introduced[e]) + " times");
  return issues;
}

// ---------------------------------------------------------------------------
// Heuristic decompositions

enum class Elimination { MinFill, MinDegree };

// Bags from an elimination order: bag(v) = {v} ∪ later neighbours at elimination time.
inline TreeDecomposition decomposition_from_order(const Graph& g, const std::vector<VertexId>& order) {
  const int n = g.num_vertices();
  if (static_cast<int>(order.size()) != n) throw Error("elimination order has wrong length");
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    if (order[i] < 0 || order[i] >= n || pos[order[i]] != -1) throw Error("elimination order is not a permutation");
    pos[order[i]] = i;
  }
  std::vector<std::set<VertexId>> nb(n);
  for (const auto& [u, v] : g.edges()) nb[u].insert(v), nb[v].insert(u);
  TreeDecomposition td;
  td.bags.resize(n);
  std::vector<int> parent_vertex(n, -1);
  for (int i = 0; i < n; ++i) {
    VertexId v = order[i];
    std::vector<VertexId> later(nb[v].begin(), nb[v].end());
    for (auto a : later) {
      nb[a].erase(v);
      for (auto b : later)
        if (a != b) nb[a].insert(b);
    }
    td.bags[i] = later;
    td.bags[i].push_back(v);
    std::sort(td.bags[i].begin(), td.bags[i].end());
    if (!later.empty())
      parent_vertex[i] = *std::min_element(later.begin(), later.end(), [&](int a, int b) { return pos[a] < pos[b]; });
  }
  std::vector<int> roots;
  for (int i = 0; i < n; ++i) {
    if (parent_vertex[i] >= 0) td.tree_edges.push_back({i, pos[parent_vertex[i]]});
    else roots.push_back(i);
  }
  for (std::size_t i = 1; i < roots.size(); ++i) td.tree_edges.push_back({roots[i - 1], roots[i]});
  return td;
}

inline std::vector<VertexId> elimination_order(const Graph& g, Elimination heuristic) {
  const int n = g.num_vertices();
  std::vector<std::set<VertexId>> nb(n);
  for (const auto& [u, v] : g.edges()) nb[u].insert(v), nb[v].insert(u);
  std::vector<bool> done(n, false);
  std::vector<VertexId> order;
  auto fill = [&](VertexId v) {
    long long f = 0;
    for (auto a = nb[v].begin(); a != nb[v].end(); ++a)
      for (auto b = std::next(a); b != nb[v].end(); ++b)
        if (!nb[*a].count(*b)) ++f;
    return f;
  };
  for (int step = 0; step < n; ++step) {
    VertexId best = -1;
    std::pair<long long, long long> best_key{};
    for (VertexId v = 0; v < n; ++v) {
      if (done[v]) continue;
      long long deg = static_cast<long long>(nb[v].size());
      std::pair<long long, long long> key =
          heuristic == Elimination::MinFill ? std::pair{fill(v), deg} : std::pair{deg, fill(v)};
      if (best < 0 || key < best_key) best = v, best_key = key;
    }
    done[best] = true;
    order.push_back(best);
    std::vector<VertexId> later(nb[best].begin(), nb[best].end());
    for (auto a : later) {
      nb[a].erase(best);
      for (auto b : later)
        if (a != b) nb[a].insert(b);
    }
    nb[best].clear();
  }
  return order;
}

inline TreeDecomposition greedy_decomposition(const Graph& g, Elimination heuristic = Elimination::MinFill) {
  return decomposition_from_order(g, elimination_order(g, heuristic));
}

// ---------------------------------------------------------------------------
// PACE .td I/O

inline TreeDecomposition parse_td(std::istream& in) {
  TreeDecomposition td;
  std::string line;
  int lineno = 0;
  bool header = false;
  long long nbags = 0, maxbag = 0, nverts = 0;
  std::vector<bool> have;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "s") {
      if (header) throw ParseError(lineno, "duplicate header");
      if (tok.size() != 5 || tok[1] != "td") throw ParseError(lineno, "expected 's td <bags> <width+1> <n>'");
      auto a = detail::parse_int(tok[2]), b = detail::parse_int(tok[3]), c = detail::parse_int(tok[4]);
      if (!a || !b || !c || *a < 0 || *b < 0 || *c < 0) throw ParseError(lineno, "bad header counts");
      nbags = *a, maxbag = *b, nverts = *c;
      td.bags.assign(nbags, {});
      have.assign(nbags, false);
      header = true;
      continue;
    }
    if (!header) throw ParseError(lineno, "line before 's td' header");
    if (tok[0] == "b") {
      if (tok.size() < 2) throw ParseError(lineno, "bag line without id");
      auto id = detail::parse_int(tok[1]);
      if (!id || *id < 1 || *id > nbags) throw ParseError(lineno, "bag id out of range");
      if (have[*id - 1]) throw ParseError(lineno, "duplicate bag id");
      have[*id - 1] = true;
      auto& bag = td.bags[*id - 1];
      for (std::size_t i = 2; i < tok.size(); ++i) {
        auto v = detail::parse_int(tok[i]);
        if (!v || *v < 1 || *v > nverts) throw ParseError(lineno, "vertex id out of range");
        bag.push_back(static_cast<VertexId>(*v - 1));
      }
      std::sort(bag.begin(), bag.end());
      if (std::adjacent_find(bag.begin(), bag.end()) != bag.end()) throw ParseError(lineno, "repeated vertex in bag");
      if (static_cast<long long>(bag.size()) > maxbag) throw ParseError(lineno, "bag larger than announced width+1");
      continue;
    }
    if (tok.size() != 2) throw ParseError(lineno, "expected tree edge 'i j'");
    auto a = detail::parse_int(tok[0]), b = detail::parse_int(tok[1]);
    if (!a || !b || *a < 1 || *a > nbags || *b < 1 || *b > nbags) throw ParseError(lineno, "tree edge out of range");
    td.tree_edges.push_back({static_cast<int>(*a - 1), static_cast<int>(*b - 1)});
  }
  if (!header) throw ParseError(0, "missing 's td' header");
  for (long long i = 0; i < nbags; ++i)
    if (!have[i]) throw ParseError(lineno, "bag " + std::to_string(i + 1) + " never listed");
  return td;
}

inline TreeDecomposition parse_td(const std::string& text) {
  std::istringstream in(text);
  return parse_td(in);
}

inline std::string write_td(const TreeDecomposition& td, int num_vertices) {
  std::ostringstream out;
  out << "s td " << td.bags.size() << ' ' << td.width() + 1 << ' ' << num_vertices << '\n';
  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    out << "b " << i + 1;
    for (auto v : td.bags[i]) out << ' ' << v + 1;
    out << '\n';
  }
  for (auto [a, b] : td.tree_edges) out << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Nice decomposition JSON:
// {"root": r, "width": w, "nodes": [{"id": i, "type": "leaf"|"introduce_vertex"|
//   "introduce_edge"|"forget"|"join", "bag": [...], "children": [...],
//   "vertex": v (introduce_vertex/forget), "edge": e (introduce_edge)}, ...]}

inline nlohmann::json to_json(const NiceDecomposition& nd) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < nd.nodes.size(); ++i) {
    const auto& x = nd.nodes[i];
    nlohmann::json j{{"id", i}, {"type", to_string(x.kind)}, {"bag", x.bag}, {"children", x.children}};
    if (x.kind == NiceKind::IntroduceVertex || x.kind == NiceKind::Forget) j["vertex"] = x.vertex;
    if (x.kind == NiceKind::IntroduceEdge) j["edge"] = x.edge;
    nodes.push_back(std::move(j));
  }
  return {{"root", nd.root}, {"width", nd.width()}, {"nodes", std::move(nodes)}};
}

inline NiceDecomposition nice_from_json(const nlohmann::json& j) {
  static const std::map<std::string, NiceKind> kinds{{"leaf", NiceKind::Leaf},
                                                     {"introduce_vertex", NiceKind::IntroduceVertex},
                                                     {"introduce_edge", NiceKind::IntroduceEdge},
                                                     {"forget", NiceKind::Forget},
                                                     {"join", NiceKind::Join}};
  try {
    NiceDecomposition nd;
    nd.root = j.at("root").get<int>();
    const auto& nodes = j.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& x = nodes[i];
      if (x.at("id").get<std::size_t>() != i) throw ParseError(0, "node ids must be 0..n-1 in order");
      auto it = kinds.find(x.at("type").get<std::string>());
      if (it == kinds.end()) throw ParseError(0, "unknown node type");
      NiceNode node;
      node.kind = it->second;
      node.bag = x.at("bag").get<std::vector<VertexId>>();
      node.children = x.at("children").get<std::vector<int>>();
      if (x.contains("vertex")) node.vertex = x["vertex"].get<int>();
      if (x.contains("edge")) node.edge = x["edge"].get<int>();
      nd.nodes.push_back(std::move(node));
    }
    return nd;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("nice decomposition JSON: ") + e.what());
  }
}

}  // namespace ecml
