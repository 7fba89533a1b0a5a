#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ecml/decomposition.hpp"
#include "ecml/error.hpp"
#include "ecml/graph.hpp"

namespace ecml {

// 3CNF; literal +x / -x for variable x in 1..num_vars.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;

  bool satisfied_by(std::uint64_t assignment) const {
    for (const auto& c : clauses) {
      bool sat = false;
      for (int lit : c) {
        bool value = (assignment >> (std::abs(lit) - 1)) & 1;
        sat = sat || (lit > 0 ? value : !value);
      }
      if (!sat) return false;
    }
    return true;
  }

  bool satisfiable() const {
    if (num_vars > 30) throw BudgetExceeded("too many variables for exhaustive SAT");
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << num_vars); ++a)
      if (satisfied_by(a)) return true;
    return false;
  }
};

// DIMACS "p cnf n m". Clauses with one or two literals are padded to three by
// repeating their last literal.
inline CnfFormula parse_dimacs(std::istream& in) {
  CnfFormula f;
  std::string line;
  int lineno = 0, declared = -1;
  bool header = false;
  std::vector<int> current;
  while (std::getline(in, line)) {
    ++lineno;
    auto words = detail::split_ws(line);
    if (words.empty() || words[0] == "c" || words[0][0] == 'c') continue;
    if (words[0] == "p") {
      if (header || words.size() != 4 || words[1] != "cnf") throw ParseError(lineno, "expected 'p cnf <vars> <clauses>'");
      auto n = detail::parse_int(words[2]), m = detail::parse_int(words[3]);
      if (!n || !m || *n < 1 || *m < 0) throw ParseError(lineno, "bad problem line");
      f.num_vars = static_cast<int>(*n);
      declared = static_cast<int>(*m);
      header = true;
      continue;
    }
    if (!header) throw ParseError(lineno, "clause before the problem line");
    for (const auto& w : words) {
      auto lit = detail::parse_int(w);
      if (!lit) throw ParseError(lineno, "bad literal '" + w + "'");
      if (*lit == 0) {
        if (current.empty()) throw ParseError(lineno, "empty clause");
        if (current.size() > 3) throw ParseError(lineno, "clause with more than three literals");
        while (current.size() < 3) current.push_back(current.back());
        f.clauses.push_back({current[0], current[1], current[2]});
        current.clear();
        continue;
      }
      if (std::abs(*lit) > f.num_vars) throw ParseError(lineno, "variable out of range");
      current.push_back(static_cast<int>(*lit));
    }
  }
  if (!header) throw ParseError(0, "missing problem line");
  if (!current.empty()) throw ParseError(lineno, "unterminated clause");
  if (static_cast<int>(f.clauses.size()) != declared)
    throw ParseError(0, "expected " + std::to_string(declared) + " clauses, found " + std::to_string(f.clauses.size()));
  return f;
}

inline CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

inline std::string write_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) out << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
  return out.str();
}

struct VariableGadget {
  VertexId t_pos, t_neg;
  std::vector<std::vector<VertexId>> paths;  // u-v, u'-v', then the alpha and beta paths between t_x and t_-x
};

struct ClauseGadget {
  std::array<VertexId, 3> s;
  std::vector<std::vector<VertexId>> paths;  // three beta paths u_i-v_i, then alpha/beta pairs s1s2, s2s3, s3s1
};

struct HardInstance {
  Graph graph;
  int k = 0, l = 0, alpha = 0, beta = 0;
  std::vector<VertexId> A, B;
  std::vector<VariableGadget> variables;
  std::vector<ClauseGadget> clauses;
  std::vector<std::vector<VertexId>> gadget_vertices;  // per gadget, outside A ∪ B; variables first
  TreeDecomposition path_decomposition;

  // literal +x -> 2(x-1), -x -> 2(x-1)+1, placed at (A[i / |B|], B[i % |B|])
  std::pair<VertexId, VertexId> placement(int lit) const {
    std::size_t i = 2 * static_cast<std::size_t>(std::abs(lit) - 1) + (lit < 0 ? 1 : 0);
    return {A[i / B.size()], B[i % B.size()]};
  }
};

// Width bound of the emitted decomposition: 2 ceil(sqrt(2n)) + 3 alpha + 6 beta - 10.
inline int hardness_width_bound(int num_vars, int l) {
  int side = static_cast<int>(std::ceil(std::sqrt(2.0 * num_vars) - 1e-9));
  while (side * side < 2 * num_vars) ++side;
  int alpha = (l - 1) / 2, beta = (l + 2) / 2;
  return 2 * side + 3 * alpha + 6 * beta - 10;
}

inline HardInstance generate_hard_instance(const CnfFormula& cnf, int l) {
  if (l < 5) throw Error("cycle length l must be at least 5");
  if (cnf.num_vars < 1) throw Error("formula needs at least one variable");
  for (const auto& c : cnf.clauses)
    for (int lit : c)
      if (lit == 0 || std::abs(lit) > cnf.num_vars) throw Error("literal out of range");

  HardInstance h;
  h.l = l;
  h.alpha = (l - 1) / 2;
  h.beta = (l + 2) / 2;  // ceil((l+1)/2)
  h.k = cnf.num_vars + 2 * static_cast<int>(cnf.clauses.size());
  int side = static_cast<int>(std::ceil(std::sqrt(2.0 * cnf.num_vars) - 1e-9));
  while (side * side < 2 * cnf.num_vars) ++side;

  int next = 0;
  std::vector<Edge> edges;
  for (int i = 0; i < side; ++i) h.A.push_back(next++);
  for (int i = 0; i < side; ++i) h.B.push_back(next++);

  std::vector<VertexId>* owner = nullptr;
  // path of `length` edges from a to b through fresh vertices
  auto path = [&](VertexId a, VertexId b, int length) {
    std::vector<VertexId> p{a};
    for (int i = 1; i < length; ++i) {
      p.push_back(next);
      owner->push_back(next++);
    }
    p.push_back(b);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) edges.push_back({p[i], p[i + 1]});
    return p;
  };

  for (int x = 1; x <= cnf.num_vars; ++x) {
    h.gadget_vertices.emplace_back();
    owner = &h.gadget_vertices.back();
    VariableGadget g;
    auto [u, v] = h.placement(x);
    auto [u2, v2] = h.placement(-x);
    g.paths.push_back(path(u, v, h.alpha));
    g.paths.push_back(path(u2, v2, h.alpha));
    g.t_pos = g.paths[0][1];
    g.t_neg = g.paths[1][1];
    g.paths.push_back(path(g.t_pos, g.t_neg, h.alpha));
    g.paths.push_back(path(g.t_pos, g.t_neg, h.beta));
    h.variables.push_back(std::move(g));
  }
  for (const auto& clause : cnf.clauses) {
    h.gadget_vertices.emplace_back();
    owner = &h.gadget_vertices.back();
    ClauseGadget g;
    for (int i = 0; i < 3; ++i) {
      auto [u, v] = h.placement(clause[i]);
      g.paths.push_back(path(u, v, h.beta));
      g.s[i] = g.paths.back()[1];
    }
    for (int i = 0; i < 3; ++i) {
      g.paths.push_back(path(g.s[i], g.s[(i + 1) % 3], h.alpha));
      g.paths.push_back(path(g.s[i], g.s[(i + 1) % 3], h.beta));
    }
    h.clauses.push_back(std::move(g));
  }
  h.graph = Graph(next, std::move(edges));

  for (std::size_t gi = 0; gi < h.gadget_vertices.size(); ++gi) {
    std::vector<VertexId> bag(h.A);
    bag.insert(bag.end(), h.B.begin(), h.B.end());
    bag.insert(bag.end(), h.gadget_vertices[gi].begin(), h.gadget_vertices[gi].end());
    std::sort(bag.begin(), bag.end());
    h.path_decomposition.bags.push_back(std::move(bag));
    if (gi > 0) h.path_decomposition.tree_edges.push_back({static_cast<int>(gi) - 1, static_cast<int>(gi)});
  }
  return h;
}

inline nlohmann::json gadget_index_json(const HardInstance& h) {
  nlohmann::json j;
  j["k"] = h.k;
  j["l"] = h.l;
  j["alpha"] = h.alpha;
  j["beta"] = h.beta;
  j["A"] = h.A;
  j["B"] = h.B;
  j["variables"] = nlohmann::json::array();
  for (const auto& g : h.variables) j["variables"].push_back({{"t_pos", g.t_pos}, {"t_neg", g.t_neg}, {"paths", g.paths}});
  j["clauses"] = nlohmann::json::array();
  for (const auto& g : h.clauses) j["clauses"].push_back({{"s", g.s}, {"paths", g.paths}});
  return j;
}

// Simple cycles with at most max_len vertices, each once, as vertex lists.
inline std::vector<std::vector<VertexId>> short_cycles(const Graph& g, int max_len, std::uint64_t budget = std::uint64_t{1} << 26) {
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> path;
  std::vector<bool> on(g.num_vertices(), false);
  std::uint64_t steps = 0;
  std::function<void(VertexId, VertexId)> dfs = [&](VertexId s, VertexId v) {
    if (++steps > budget) throw BudgetExceeded("cycle enumeration exceeded its budget");
    for (auto [e, w] : g.incident(v)) {
      (void)e;
      if (w == s && path.size() >= 3 && path[1] < path.back()) out.push_back(path);
      if (w <= s || on[w] || static_cast<int>(path.size()) >= max_len) continue;
      on[w] = true;
      path.push_back(w);
      dfs(s, w);
      path.pop_back();
      on[w] = false;
    }
  };
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    path = {s};
    on[s] = true;
    dfs(s, s);
    on[s] = false;
  }
  return out;
}

// Whether at most k vertices hit every listed cycle. Branches on the vertices of
// an unhit cycle; prunes with a greedy packing of disjoint unhit cycles.
inline bool hitting_set_exists(int num_vertices, const std::vector<std::vector<VertexId>>& cycles, int k,
                               std::uint64_t budget = std::uint64_t{1} << 24) {
  std::vector<bool> deleted(num_vertices, false);
  std::uint64_t steps = 0;
  auto hit = [&](const std::vector<VertexId>& c) {
    return std::any_of(c.begin(), c.end(), [&](VertexId v) { return deleted[v]; });
  };
  std::function<bool(int)> rec = [&](int left) {
    if (++steps > budget) throw BudgetExceeded("hitting set search exceeded its budget");
    const std::vector<VertexId>* pick = nullptr;
    std::vector<bool> used(num_vertices, false);
    int packed = 0;
    for (const auto& c : cycles) {
      if (hit(c)) continue;
      if (!pick || c.size() < pick->size()) pick = &c;
      if (std::none_of(c.begin(), c.end(), [&](VertexId v) { return used[v]; })) {
        for (VertexId v : c) used[v] = true;
        ++packed;
      }
    }
    if (!pick) return true;
    if (packed > left) return false;
    for (VertexId v : *pick) {
      deleted[v] = true;
      bool ok = rec(left - 1);
      deleted[v] = false;
      if (ok) return true;
    }
    return false;
  };
  return rec(k);
}

struct EquivalenceReport {
  bool satisfiable = false;
  bool cl_deletion = false;     // some <= k vertices hit all cycles of length exactly l
  bool girth_deletion = false;  // some <= k vertices hit all cycles of length <= l
  bool holds() const { return satisfiable == cl_deletion && (!satisfiable || girth_deletion); }
};

inline EquivalenceReport check_equivalence(const HardInstance& h, const CnfFormula& cnf) {
  EquivalenceReport r;
  r.satisfiable = cnf.satisfiable();
  auto all = short_cycles(h.graph, h.l);
  std::vector<std::vector<VertexId>> exact;
  for (const auto& c : all)
    if (static_cast<int>(c.size()) == h.l) exact.push_back(c);
  r.cl_deletion = hitting_set_exists(h.graph.num_vertices(), exact, h.k);
  r.girth_deletion = hitting_set_exists(h.graph.num_vertices(), all, h.k);
  return r;
}

}  // namespace ecml
