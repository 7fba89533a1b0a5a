#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ecml/count.hpp"
#include "ecml/decomposition.hpp"
#include "ecml/detail/bag_program.hpp"
#include "ecml/detail/gf2.hpp"
#include "ecml/error.hpp"
#include "ecml/graph.hpp"
#include "ecml/problem.hpp"

namespace ecml {

inline constexpr const char* kRngName = "mt19937_64";

// ω on U = (V x {0,1,2}^p1) ∪ (E x {0,1,2}^q1), values in [1, N] with N = 2|U|.
// The {0,1,2} vectors are indexed as base-3 numbers, set 0 being the lowest digit.
struct WeightAssignment {
  std::uint64_t universe = 0;
  std::uint64_t N = 0;
  std::vector<std::vector<std::uint64_t>> vertex, edge;

  // W never exceeds this.
  std::uint64_t max_total() const { return N * (vertex.size() + edge.size()); }
};

namespace detail {

inline std::uint64_t pow3(int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= 3;
  return r;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run) { return splitmix64(seed + run * 0x9E3779B97F4A7C15ULL); }

inline WeightAssignment draw_weights(const Instance& inst, const ProblemSpec& spec, std::mt19937_64& rng) {
  const std::uint64_t n = inst.graph.num_vertices(), m = inst.graph.num_edges();
  const std::uint64_t vdig = pow3(spec.p1()), edig = pow3(spec.q1());
  WeightAssignment w;
  w.universe = n * vdig + m * edig;
  w.N = 2 * w.universe;
  if (w.N == 0) return w;
  std::uniform_int_distribution<std::uint64_t> dist(1, w.N);
  w.vertex.assign(n, std::vector<std::uint64_t>(vdig));
  w.edge.assign(m, std::vector<std::uint64_t>(edig));
  for (auto& row : w.vertex)
    for (auto& x : row) x = dist(rng);
  for (auto& row : w.edge)
    for (auto& x : row) x = dist(rng);
  return w;
}

template <class V, class F>
Weights<V> lift_weights(const WeightAssignment& w, F&& to_value) {
  Weights<V> out;
  for (const auto& row : w.vertex) {
    out.vertex.emplace_back();
    for (auto x : row) out.vertex.back().push_back(to_value(x));
  }
  for (const auto& row : w.edge) {
    out.edge.emplace_back();
    for (auto x : row) out.edge.back().push_back(to_value(x));
  }
  return out;
}

}  // namespace detail

inline WeightAssignment sample_weights(const Instance& inst, const ProblemSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return detail::draw_weights(inst, spec, rng);
}

// Weights W (ascending) for which the number of candidate solutions in the branch,
// together with their consistent cuts and markers, is odd.
inline std::vector<std::uint64_t> mod2_object_count(const Instance& inst, const NiceDecomposition& nd, const ProblemSpec& spec,
                                                    const BranchAssignment& branch, const WeightAssignment& w,
                                                    detail::DpOptions opt = {}) {
  using detail::Gf2Poly;
  check_instance(inst, spec);
  auto cm = detail::CompiledMatrix::compile(spec.matrix);
  auto weights = detail::lift_weights<Gf2Poly>(w, [](std::uint64_t x) { return Gf2Poly::monomial(x); });
  detail::BagDP<Gf2Poly> dp(inst, spec, cm, detail::branch_bounds(spec, {branch}, true), opt, &weights);
  auto root = dp.run(nd);
  Gf2Poly total = detail::branch_total(root, dp.acc_layout(), branch);
  std::vector<std::uint64_t> out;
  for (auto d : total.support()) out.push_back(d);
  return out;
}

struct DecideOptions {
  double target_error = std::ldexp(1.0, -20);
  int workers = 1;
  // Overrides the repetition schedule when positive.
  int repetitions = 0;
  detail::DpOptions dp;
};

struct OddWitness {
  std::size_t branch = 0;
  BranchAssignment assignment;
  std::uint64_t W = 0;
};

struct DecideResult {
  bool answer = false;
  std::uint64_t seed = 0;
  std::size_t branches = 0;
  int repetitions = 0;  // scheduled
  int runs = 0;         // executed before an answer
  std::string rng = kRngName;
  std::optional<OddWitness> witness;
};

// Runs r1 = ceil(log2(2K)) per branch times r2 = ceil(log2(1/target_error)).
inline int repetition_schedule(std::size_t branches, double target_error) {
  if (!(target_error > 0 && target_error < 1)) throw Error("target error must lie in (0, 1)");
  int r1 = static_cast<int>(std::ceil(std::log2(2.0 * static_cast<double>(std::max<std::size_t>(branches, 1)))));
  int r2 = static_cast<int>(std::ceil(-std::log2(target_error) - 1e-12));
  return std::max(1, r1) * std::max(1, r2);
}

namespace detail {

struct RunOutcome {
  std::optional<std::size_t> branch;  // first branch with a nonzero value
};

// One repetition: weights for every branch at once, evaluated at a random point of GF(2^64).
inline RunOutcome run_once(const Instance& inst, const NiceDecomposition& nd, const ProblemSpec& spec, const CompiledMatrix& cm,
                           const std::vector<BranchAssignment>& branches, const Bounds& bounds, std::uint64_t seed,
                           const DpOptions& opt) {
  std::mt19937_64 rng(seed);
  WeightAssignment w = draw_weights(inst, spec, rng);
  Gf64 alpha;
  do alpha = {rng()};
  while (alpha.is_zero());
  auto weights = lift_weights<Gf64>(w, [&](std::uint64_t x) { return alpha.pow(x); });
  BagDP<Gf64> dp(inst, spec, cm, bounds, opt, &weights);
  auto root = dp.run(nd);
  for (std::size_t b = 0; b < branches.size(); ++b)
    if (!branch_total(root, dp.acc_layout(), branches[b]).is_zero()) return {b};
  return {};
}

}  // namespace detail

// Monte Carlo decision: YES answers are always correct.
inline DecideResult decide(const Instance& inst, const NiceDecomposition& nd, const ProblemSpec& spec, std::uint64_t seed,
                           const DecideOptions& opts = {}) {
  auto problems = check_nice(inst.graph, nd);
  if (!problems.empty()) throw Error("invalid nice decomposition: " + problems.front());
  ArithExpr phi = spec.constraint();
  check_monotone_cc(phi);
  DecideResult res;
  res.seed = seed;
  auto branches = enumerate_branches(inst, spec);
  res.branches = branches.size();
  res.repetitions = opts.repetitions > 0 ? opts.repetitions : repetition_schedule(branches.size(), opts.target_error);
  if (branches.empty()) return res;

  auto cm = detail::CompiledMatrix::compile(spec.matrix);
  detail::Bounds bounds = detail::branch_bounds(spec, branches, true);
  const int workers = std::max(1, opts.workers);
  std::optional<std::pair<int, std::size_t>> hit;  // (run, branch)
  for (int start = 0; start < res.repetitions && !hit; start += workers) {
    int count = std::min(workers, res.repetitions - start);
    std::vector<detail::RunOutcome> outcomes(count);
    auto work = [&](int t) {
      outcomes[t] = detail::run_once(inst, nd, spec, cm, branches, bounds, detail::run_seed(seed, start + t), opts.dp);
    };
    if (count == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(count);
      for (int t = 0; t < count; ++t)
        pool.emplace_back([&, t] {
          try {
            work(t);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    res.runs = start + count;
    for (int t = 0; t < count && !hit; ++t)
      if (outcomes[t].branch) {
        hit = {start + t, *outcomes[t].branch};
        res.runs = start + t + 1;
      }
  }
  if (!hit) return res;

  res.answer = true;
  auto [run, b] = *hit;
  std::mt19937_64 rng(detail::run_seed(seed, run));
  WeightAssignment w = detail::draw_weights(inst, spec, rng);
  auto odd = mod2_object_count(inst, nd, spec, branches[b], w, opts.dp);
  if (odd.empty()) throw Error("internal error: nonzero evaluation without an odd weight class");
  res.witness = OddWitness{b, branches[b], odd.front()};
  return res;
}

}  // namespace ecml
