#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <vector>

#include "ecml/arith.hpp"
#include "ecml/count.hpp"
#include "ecml/cut_count.hpp"
#include "ecml/error.hpp"
#include "ecml/formula.hpp"
#include "ecml/graph.hpp"
#include "ecml/problem.hpp"

namespace ecml {

struct OracleOptions {
  std::uint64_t budget = std::uint64_t{1} << 25;  // search nodes
};

// Exhaustive search over X̄ then Ȳ (vertices in id order, all p1 memberships per
// vertex; then edges in id order, all q1 memberships per edge). ψ is checked at a
// vertex as soon as everything within its modal radius is assigned.
inline void for_each_model(const Instance& inst, const ProblemSpec& spec, const std::function<void(const Assignment&)>& visit,
                           const OracleOptions& opts = {}) {
  check_instance(inst, spec);
  const Graph& g = inst.graph;
  const int n = g.num_vertices(), m = g.num_edges(), p1 = spec.p1(), q1 = spec.q1();
  const int depth = modal_depth(spec.matrix);

  // ready[v]: last decision position the value of ψ at v depends on
  std::vector<std::vector<VertexId>> check_at(n + m + 1);
  for (VertexId v = 0; v < n; ++v) {
    std::vector<int> dist(n, -1);
    std::queue<VertexId> q;
    dist[v] = 0;
    q.push(v);
    int ready = p1 > 0 ? v : -1;
    while (!q.empty()) {
      VertexId u = q.front();
      q.pop();
      if (p1 > 0) ready = std::max(ready, u);
      if (dist[u] >= depth) continue;
      for (auto [e, w] : g.incident(u)) {
        if (q1 > 0) ready = std::max(ready, n + e);
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    check_at[ready + 1].push_back(v);
  }

  Assignment a;
  a.vertex_sets.assign(p1, VertexSet::of(n));
  a.edge_sets.assign(q1, EdgeSet::of(m));
  std::uint64_t nodes = 0;
  auto ok_at = [&](int pos) {
    for (VertexId v : check_at[pos])
      if (!eval_cml(inst, a, v, spec.matrix)) return false;
    return true;
  };
  std::function<void(int)> rec = [&](int pos) {
    if (++nodes > opts.budget) throw BudgetExceeded("oracle search exceeded " + std::to_string(opts.budget) + " nodes");
    if (!ok_at(pos)) return;
    if (pos == n + m) {
      visit(a);
      return;
    }
    bool vertex = pos < n;
    int k = vertex ? p1 : q1;
    if (k == 0) {
      rec(pos + 1);
      return;
    }
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      for (int i = 0; i < k; ++i) {
        if (vertex)
          a.vertex_sets[i].bits[pos] = (mask >> i) & 1;
        else
          a.edge_sets[i].bits[pos - n] = (mask >> i) & 1;
      }
      rec(pos + 1);
    }
    for (int i = 0; i < k; ++i) {
      if (vertex)
        a.vertex_sets[i].bits[pos] = false;
      else
        a.edge_sets[i].bits[pos - n] = false;
    }
  };
  rec(0);
}

// Number of models of ψ per (|X̄|, |Ȳ|, cc of the sets whose cc occurs in φ).
// φ can then be evaluated for many parameter values without searching again.
struct OracleProfile {
  std::map<std::vector<int>, BigInt> counts;
};

inline OracleProfile oracle_profile(const Instance& inst, const ProblemSpec& spec, const OracleOptions& opts = {}) {
  OracleProfile prof;
  const Graph& g = inst.graph;
  for_each_model(
      inst, spec,
      [&](const Assignment& a) {
        std::vector<int> key;
        for (const auto& x : a.vertex_sets) key.push_back(x.size());
        for (const auto& y : a.edge_sets) key.push_back(y.size());
        for (int i = 0; i < spec.p1(); ++i)
          if (spec.vertex_cc[i]) key.push_back(connected_components(g, a.vertex_sets[i]));
        for (int j = 0; j < spec.q1(); ++j)
          if (spec.edge_cc[j]) key.push_back(connected_components(g, a.edge_sets[j]));
        prof.counts[key] += 1;
      },
      opts);
  return prof;
}

inline BigInt profile_count(const OracleProfile& prof, const Instance& inst, const ProblemSpec& spec) {
  ArithEnv env = constant_env(inst, spec);
  ArithExpr phi = spec.constraint();
  BigInt total = 0;
  for (const auto& [key, count] : prof.counts) {
    std::size_t at = 0;
    for (int i = 0; i < spec.p1(); ++i) env[detail::quant_card(true, i)] = key[at++];
    for (int j = 0; j < spec.q1(); ++j) env[detail::quant_card(false, j)] = key[at++];
    for (int i = 0; i < spec.p1(); ++i)
      if (spec.vertex_cc[i]) env[detail::quant_cc(true, i)] = key[at++];
    for (int j = 0; j < spec.q1(); ++j)
      if (spec.edge_cc[j]) env[detail::quant_cc(false, j)] = key[at++];
    if (eval_arith(phi, env)) total += count;
  }
  return total;
}

inline BigInt brute_force_count(const Instance& inst, const ProblemSpec& spec, const OracleOptions& opts = {}) {
  return profile_count(oracle_profile(inst, spec, opts), inst, spec);
}

inline bool brute_force_decide(const Instance& inst, const ProblemSpec& spec, const OracleOptions& opts = {}) {
  return brute_force_count(inst, spec, opts) > 0;
}

// Number of consistent cuts of G[X] (no edge between side 1 and side 2) that put every marker on side 1.
inline std::uint64_t count_cuts(const Graph& g, const VertexSet& x, const VertexSet& markers) {
  std::vector<VertexId> members;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (x.contains(v)) members.push_back(v);
  if (members.size() > 30) throw BudgetExceeded("too many vertices for cut enumeration");
  std::vector<int> side(g.num_vertices(), 0);
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << members.size()); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < members.size(); ++i) {
      side[members[i]] = (mask >> i) & 1 ? 2 : 1;
      if (markers.contains(members[i]) && side[members[i]] != 1) ok = false;
    }
    for (const auto& [u, v] : g.edges())
      if (ok && x.contains(u) && x.contains(v) && side[u] != side[v]) ok = false;
    count += ok;
  }
  return count;
}

// Same for an edge set: cuts of V(Y) with no Y edge crossing, marked edges on side 1.
inline std::uint64_t count_cuts(const Graph& g, const EdgeSet& y, const EdgeSet& markers) {
  std::vector<VertexId> members;
  std::vector<bool> touched(g.num_vertices(), false);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (y.contains(e)) touched[g.edge(e).u] = touched[g.edge(e).v] = true;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (touched[v]) members.push_back(v);
  if (members.size() > 30) throw BudgetExceeded("too many vertices for cut enumeration");
  std::vector<int> side(g.num_vertices(), 0);
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << members.size()); ++mask) {
    for (std::size_t i = 0; i < members.size(); ++i) side[members[i]] = (mask >> i) & 1 ? 2 : 1;
    bool ok = true;
    for (EdgeId e = 0; e < g.num_edges() && ok; ++e) {
      if (!y.contains(e)) continue;
      auto [u, v] = g.edge(e);
      ok = side[u] == side[v] && (!markers.contains(e) || side[u] == 1);
    }
    count += ok;
  }
  return count;
}

// Exhaustive (candidate, markers, cuts) enumeration for one branch: number of
// objects per weight W, reduced mod 2. Candidates have the branch cardinalities
// exactly and at most cx_i / cy_j markers.
inline std::map<std::uint64_t, std::uint64_t> enumerate_objects(const Instance& inst, const ProblemSpec& spec,
                                                                const BranchAssignment& br, const WeightAssignment& w,
                                                                const OracleOptions& opts = {}) {
  const Graph& g = inst.graph;
  const int n = g.num_vertices(), m = g.num_edges(), p1 = spec.p1(), q1 = spec.q1();
  std::map<std::uint64_t, std::uint64_t> per_w;
  std::uint64_t work = 0;
  for_each_model(
      inst, spec,
      [&](const Assignment& a) {
        for (int i = 0; i < p1; ++i)
          if (a.vertex_sets[i].size() != br.x[i]) return;
        for (int j = 0; j < q1; ++j)
          if (a.edge_sets[j].size() != br.y[j]) return;
        // marker choices per tracked set, as member-subset masks
        std::vector<std::vector<int>> members(p1 + q1);
        for (int i = 0; i < p1; ++i)
          for (VertexId v = 0; v < n; ++v)
            if (a.vertex_sets[i].contains(v)) members[i].push_back(v);
        for (int j = 0; j < q1; ++j)
          for (EdgeId e = 0; e < m; ++e)
            if (a.edge_sets[j].contains(e)) members[p1 + j].push_back(e);
        std::vector<int> tracked;
        for (int i = 0; i < p1; ++i)
          if (br.cx[i] >= 0) tracked.push_back(i);
        for (int j = 0; j < q1; ++j)
          if (br.cy[j] >= 0) tracked.push_back(p1 + j);
        std::vector<std::uint64_t> mask(tracked.size(), 0);
        for (;;) {
          if (++work > opts.budget) throw BudgetExceeded("object enumeration exceeded the budget");
          bool within = true;
          std::uint64_t objects = 1;
          std::vector<int> vdig(n, 0), edig(m, 0);
          for (int i = 0; i < p1; ++i)
            for (VertexId v : members[i]) vdig[v] += static_cast<int>(detail::pow3(i));
          for (int j = 0; j < q1; ++j)
            for (EdgeId e : members[p1 + j]) edig[e] += static_cast<int>(detail::pow3(j));
          for (std::size_t t = 0; t < tracked.size() && within; ++t) {
            int s = tracked[t];
            int bound = s < p1 ? br.cx[s] : br.cy[s - p1];
            if (__builtin_popcountll(mask[t]) > bound) {
              within = false;
              break;
            }
            if (s < p1) {
              VertexSet mk = VertexSet::of(n);
              for (std::size_t b = 0; b < members[s].size(); ++b)
                if ((mask[t] >> b) & 1) {
                  mk.bits[members[s][b]] = true;
                  vdig[members[s][b]] += static_cast<int>(detail::pow3(s));
                }
              objects *= count_cuts(g, a.vertex_sets[s], mk);
            } else {
              EdgeSet mk = EdgeSet::of(m);
              for (std::size_t b = 0; b < members[s].size(); ++b)
                if ((mask[t] >> b) & 1) {
                  mk.bits[members[s][b]] = true;
                  edig[members[s][b]] += static_cast<int>(detail::pow3(s - p1));
                }
              objects *= count_cuts(g, a.edge_sets[s - p1], mk);
            }
          }
          if (within && objects) {
            std::uint64_t W = 0;
            for (VertexId v = 0; v < n; ++v) W += w.vertex[v][vdig[v]];
            for (EdgeId e = 0; e < m; ++e) W += w.edge[e][edig[e]];
            per_w[W] = (per_w[W] + objects) & 1;
          }
          std::size_t t = 0;
          for (; t < tracked.size(); ++t) {
            if (++mask[t] < (std::uint64_t{1} << members[tracked[t]].size())) break;
            mask[t] = 0;
          }
          if (t == tracked.size()) break;
        }
      },
      opts);
  for (auto it = per_w.begin(); it != per_w.end();) it = it->second ? std::next(it) : per_w.erase(it);
  return per_w;
}

inline std::vector<std::uint64_t> odd_weights(const std::map<std::uint64_t, std::uint64_t>& per_w) {
  std::vector<std::uint64_t> out;
  for (const auto& [W, parity] : per_w)
    if (parity) out.push_back(W);
  return out;
}

}  // namespace ecml
