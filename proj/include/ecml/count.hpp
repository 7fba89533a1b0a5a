#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "ecml/arith.hpp"
#include "ecml/decomposition.hpp"
#include "ecml/detail/bag_program.hpp"
#include "ecml/error.hpp"
#include "ecml/graph.hpp"
#include "ecml/problem.hpp"

namespace ecml {

// Expected cardinalities of X̄ / Ȳ and, for sets whose cc occurs in φ, upper
// bounds on their numbers of components (-1 where untracked).
struct BranchAssignment {
  std::vector<int> x, y, cx, cy;
  friend bool operator==(const BranchAssignment&, const BranchAssignment&) = default;
};

namespace detail {

inline Var quant_card(bool vertex, int i) { return {VarKind::Card, vertex ? SetKind::QuantVertex : SetKind::QuantEdge, i}; }
inline Var quant_cc(bool vertex, int i) {
  return {VarKind::Components, vertex ? SetKind::QuantVertex : SetKind::QuantEdge, i};
}

// Odometer over [0, hi_0] x [0, hi_1] x ...
inline bool next_vector(std::vector<int>& v, const std::vector<int>& hi) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < hi[i]) {
      ++v[i];
      return true;
    }
    v[i] = 0;
  }
  return false;
}

}  // namespace detail

// All cardinality vectors satisfying φ. With tracked components, each one is
// paired with every maximal feasible vector of cc bounds (φ is monotone in them,
// so the feasible bounds are closed downward).
inline std::vector<BranchAssignment> enumerate_branches(const Instance& inst, const ProblemSpec& spec) {
  check_instance(inst, spec);
  const int n = inst.graph.num_vertices(), m = inst.graph.num_edges();
  const int p1 = spec.p1(), q1 = spec.q1();
  ArithEnv env = constant_env(inst, spec);
  ArithExpr phi = spec.constraint();

  std::vector<int> hi;
  for (int i = 0; i < p1; ++i) hi.push_back(n);
  for (int j = 0; j < q1; ++j) hi.push_back(m);

  // tracked cc coordinates: (vertex?, index)
  std::vector<std::pair<bool, int>> tracked;
  for (int i = 0; i < p1; ++i)
    if (spec.vertex_cc[i]) tracked.push_back({true, i});
  for (int j = 0; j < q1; ++j)
    if (spec.edge_cc[j]) tracked.push_back({false, j});

  std::vector<BranchAssignment> out;
  std::vector<int> card(p1 + q1, 0);
  do {
    for (int i = 0; i < p1; ++i) env[detail::quant_card(true, i)] = card[i];
    for (int j = 0; j < q1; ++j) env[detail::quant_card(false, j)] = card[p1 + j];
    BranchAssignment base;
    base.x.assign(card.begin(), card.begin() + p1);
    base.y.assign(card.begin() + p1, card.end());
    base.cx.assign(p1, -1);
    base.cy.assign(q1, -1);
    if (tracked.empty()) {
      if (eval_arith(phi, env)) out.push_back(base);
      continue;
    }
    // cc(Q) <= |Q|, and cc(Q) = 0 iff Q is empty
    std::vector<int> lo(tracked.size()), top(tracked.size());
    for (std::size_t t = 0; t < tracked.size(); ++t) {
      auto [vertex, i] = tracked[t];
      int c = vertex ? card[i] : card[p1 + i];
      lo[t] = c > 0 ? 1 : 0;
      top[t] = c;
    }
    std::vector<std::vector<int>> feasible;
    std::vector<int> off(tracked.size(), 0), span(tracked.size());
    for (std::size_t t = 0; t < tracked.size(); ++t) span[t] = top[t] - lo[t];
    do {
      for (std::size_t t = 0; t < tracked.size(); ++t)
        env[detail::quant_cc(tracked[t].first, tracked[t].second)] = lo[t] + off[t];
      if (eval_arith(phi, env)) feasible.push_back(off);
    } while (detail::next_vector(off, span));
    for (const auto& f : feasible) {
      bool dominated = false;
      for (const auto& g : feasible) {
        if (&g == &f) continue;
        bool ge = true, gt = false;
        for (std::size_t t = 0; t < f.size(); ++t) {
          ge = ge && g[t] >= f[t];
          gt = gt || g[t] > f[t];
        }
        if (ge && gt) {
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
      BranchAssignment b = base;
      for (std::size_t t = 0; t < tracked.size(); ++t)
        (tracked[t].first ? b.cx : b.cy)[tracked[t].second] = lo[t] + f[t];
      out.push_back(std::move(b));
    }
  } while (detail::next_vector(card, hi));
  return out;
}

namespace detail {

// Componentwise maximum over branches; nu / mu stay -1 for untracked sets.
inline Bounds branch_bounds(const ProblemSpec& spec, const std::vector<BranchAssignment>& branches, bool with_cc) {
  Bounds b;
  b.tau.assign(spec.p1(), 0);
  b.sigma.assign(spec.q1(), 0);
  b.nu.assign(spec.p1(), -1);
  b.mu.assign(spec.q1(), -1);
  for (const auto& br : branches) {
    for (int i = 0; i < spec.p1(); ++i) {
      b.tau[i] = std::max(b.tau[i], br.x[i]);
      if (with_cc && spec.vertex_cc[i]) b.nu[i] = std::max(b.nu[i], br.cx[i]);
    }
    for (int j = 0; j < spec.q1(); ++j) {
      b.sigma[j] = std::max(b.sigma[j], br.y[j]);
      if (with_cc && spec.edge_cc[j]) b.mu[j] = std::max(b.mu[j], br.cy[j]);
    }
  }
  return b;
}

// Sum of root values whose tau / sigma equal the branch targets and whose
// marker counts stay within its cc bounds.
template <class V>
V branch_total(const std::vector<std::pair<AccLayout::Values, V>>& root, const AccLayout& acc, const BranchAssignment& br) {
  V total{};
  const int p1 = acc.p1, q1 = acc.q1;
  for (const auto& [vals, value] : root) {
    bool ok = true;
    for (int i = 0; i < p1 && ok; ++i) ok = vals[i] == br.x[i];
    for (int j = 0; j < q1 && ok; ++j) ok = vals[p1 + j] == br.y[j];
    for (int i = 0; i < p1 && ok; ++i)
      if (acc.nu_field[i] >= 0) ok = vals[acc.nu_field[i]] <= br.cx[i];
    for (int j = 0; j < q1 && ok; ++j)
      if (acc.mu_field[j] >= 0) ok = vals[acc.mu_field[j]] <= br.cy[j];
    if (ok) total += value;
  }
  return total;
}

}  // namespace detail

struct CountResult {
  BigInt count;
  std::size_t branches = 0;
  std::vector<detail::NodeStat> stats;
};

inline CountResult count_with_stats(const Instance& inst, const NiceDecomposition& nd, const ProblemSpec& spec,
                                    detail::DpOptions opt = {}) {
  if (spec.has_connectivity()) throw SpecError("problem '" + spec.name + "' has connectivity constraints; use decide");
  auto problems = check_nice(inst.graph, nd);
  if (!problems.empty()) throw Error("invalid nice decomposition: " + problems.front());
  CountResult res;
  auto branches = enumerate_branches(inst, spec);
  res.branches = branches.size();
  if (branches.empty()) return res;
  auto cm = detail::CompiledMatrix::compile(spec.matrix);
  detail::BagDP<BigInt> dp(inst, spec, cm, detail::branch_bounds(spec, branches, false), opt);
  auto root = dp.run(nd);
  for (const auto& br : branches) res.count += detail::branch_total(root, dp.acc_layout(), br);
  res.stats = std::move(dp.stats);
  return res;
}

inline BigInt count_solutions(const Instance& inst, const NiceDecomposition& nd, const ProblemSpec& spec,
                              detail::DpOptions opt = {}) {
  return count_with_stats(inst, nd, spec, opt).count;
}

// Per-node table sizes, for profiling.
inline nlohmann::json table_sizes_json(const std::vector<detail::NodeStat>& stats) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : stats)
    out.push_back({{"node", s.node}, {"kind", to_string(s.kind)}, {"bag", s.bag_size}, {"entries", s.entries}});
  return out;
}

// |I| = prod(N_i + k_i) * 2^l * 2^p1 with every prediction guessed.
inline std::uint64_t information_size(const ProblemSpec& spec) {
  auto cm = detail::CompiledMatrix::compile(spec.matrix);
  std::uint64_t s = 1;
  for (const auto& set : cm.sets) s *= static_cast<std::uint64_t>(set.carrier_size());
  return s << (cm.l() + spec.p1());
}

}  // namespace ecml
