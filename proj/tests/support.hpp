#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "ecml/ecml.hpp"

namespace ecml::testing {

inline Graph random_graph(int n, double p, std::mt19937_64& rng, bool directed = false) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = directed ? 0 : u + 1; v < n; ++v)
      if (u != v && coin(rng)) edges.push_back({u, v});
  return Graph(n, std::move(edges), directed);
}

// Graph on n vertices whose edges are given by the bits of `mask` over pairs u<v in lex order.
inline Graph graph_from_mask(int n, std::uint64_t mask) {
  std::vector<Edge> edges;
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v, ++bit)
      if ((mask >> bit) & 1) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

inline Graph digraph_from_mask(int n, std::uint64_t mask) {
  std::vector<Edge> edges;
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if ((mask >> bit) & 1) edges.push_back({u, v});
      ++bit;
    }
  return Graph(n, std::move(edges), true);
}

// One representative per isomorphism class: graphs whose mask is minimal over all
// vertex permutations.
inline std::vector<Graph> all_graphs_up_to_iso(int n, bool directed) {
  const int slots = directed ? n * (n - 1) : n * (n - 1) / 2;
  std::vector<std::vector<int>> index(n, std::vector<int>(n, -1));
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = directed ? 0 : u + 1; v < n; ++v)
      if (u != v) index[u][v] = bit++;
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots); ++mask) {
    bool minimal = true;
    for (const auto& q : perms) {
      std::uint64_t image = 0;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
          if (u == v || index[u][v] < 0) continue;
          if ((mask >> index[u][v]) & 1) {
            int a = q[u], b = q[v];
            if (!directed && a > b) std::swap(a, b);
            image |= std::uint64_t{1} << index[a][b];
          }
        }
      if (image < mask) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(directed ? digraph_from_mask(n, mask) : graph_from_mask(n, mask));
  }
  return out;
}

// Random partial k-tree on n >= k+1 vertices together with a width-k decomposition.
struct PartialKTree {
  Graph graph;
  TreeDecomposition td;
};

inline PartialKTree random_partial_ktree(int n, int k, double keep, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(keep);
  std::set<std::pair<int, int>> edges;
  std::vector<std::vector<int>> cliques;  // k-cliques available for attachment
  TreeDecomposition td;
  std::vector<int> first(k + 1);
  std::iota(first.begin(), first.end(), 0);
  td.bags.push_back(first);
  for (int u = 0; u <= k; ++u)
    for (int v = u + 1; v <= k; ++v) edges.insert({u, v});
  std::vector<int> bag_of_clique;
  for (int drop = 0; drop <= k; ++drop) {
    std::vector<int> c;
    for (int u = 0; u <= k; ++u)
      if (u != drop) c.push_back(u);
    cliques.push_back(c);
    bag_of_clique.push_back(0);
  }
  for (int v = k + 1; v < n; ++v) {
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, cliques.size() - 1)(rng);
    std::vector<int> c = cliques[pick];
    std::vector<int> bag = c;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    td.bags.push_back(bag);
    int b = static_cast<int>(td.bags.size()) - 1;
    td.tree_edges.push_back({bag_of_clique[pick], b});
    for (int u : c) edges.insert({std::min(u, v), std::max(u, v)});
    for (int drop = 0; drop < k; ++drop) {
      std::vector<int> nc;
      for (int i = 0; i < k; ++i)
        if (i != drop) nc.push_back(c[i]);
      nc.push_back(v);
      std::sort(nc.begin(), nc.end());
      cliques.push_back(nc);
      bag_of_clique.push_back(b);
    }
  }
  std::vector<Edge> kept;
  for (auto [u, v] : edges)
    if (coin(rng)) kept.push_back({u, v});
  // shuffle ids so decompositions are not trivially ordered
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& e : kept) e = {perm[e.u], perm[e.v]};
  for (auto& bag : td.bags) {
    for (auto& v : bag) v = perm[v];
    std::sort(bag.begin(), bag.end());
  }
  return {Graph(n, std::move(kept)), std::move(td)};
}

inline UPSet random_upset(std::mt19937_64& rng) {
  int threshold = static_cast<int>(rng() % 6), period = 1 + static_cast<int>(rng() % 4);
  std::vector<bool> bits(threshold + period);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng() & 1;
  return canonicalize(UPSet(threshold, period, std::move(bits)));
}

// Random problem over vertex sets X, Z, edge set Y and a fixed vertex set F, with
// a matrix of modal depth at most `depth`. Arc operators only on directed graphs.
inline std::string random_problem_source(std::mt19937_64& rng, int depth, bool directed) {
  static const char* counts[] = {">=1", "{0}", "{2}", "even", "{1}", "odd", "<=1"};
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  int fuel = 12;
  std::function<std::string(int, bool)> gen = [&](int d, bool modal) -> std::string {
    int choice = --fuel > 0 ? pick(d > 0 ? 8 : 5) : 0;
    switch (choice) {
      case 0:
      case 1: {
        std::vector<std::string> atoms = {"X", "Z", "F"};
        if (modal) {
          atoms.push_back("Y");
          if (directed) atoms.insert(atoms.end(), {"up", "down"});
        }
        return atoms[pick(static_cast<int>(atoms.size()))];
      }
      case 2: return "!" + gen(d, modal);
      case 3: {
        static const char* ops[] = {" & ", " | ", " -> ", " <-> "};
        return "(" + gen(d, modal) + ops[pick(4)] + gen(d, modal) + ")";
      }
      case 4: return "(" + gen(0, modal) + " & " + gen(0, modal) + ")";
      default: {
        std::string op = pick(3) == 0 ? "box" : "diamond";
        return op + "[" + counts[pick(7)] + "](" + gen(d - 1, true) + ")";
      }
    }
  };
  static const char* requirements[] = {"", "require |X| <= 2\n", "require |Y| >= 1\n", "require |X| + |Z| == 3\n",
                                       "require |Z| <= |Y|\n"};
  std::string src = "problem \"random\"\n";
  if (directed) src += "directed\n";
  src += "fixed vertexset F\nexists vertexset X, Z\nexists edgeset Y\n";
  src += requirements[pick(5)];
  std::string matrix;
  do {
    fuel = 12;
    matrix = gen(depth, false);
  } while (depth > 0 && matrix.find('[') == std::string::npos);
  src += "formula: " + matrix + "\n";
  return src;
}

inline NiceDecomposition nice_of(const Graph& g) { return make_nice(g, greedy_decomposition(g)); }

}  // namespace ecml::testing
