#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace ecml;

namespace {

// Every assignment, no pruning.
BigInt naive_count(const Instance& inst, const ProblemSpec& spec) {
  const Graph& g = inst.graph;
  const int n = g.num_vertices(), m = g.num_edges();
  const int bits = spec.p1() * n + spec.q1() * m;
  REQUIRE(bits <= 22);
  BigInt total = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    Assignment a;
    int at = 0;
    for (int i = 0; i < spec.p1(); ++i) {
      a.vertex_sets.push_back(VertexSet::of(n));
      for (int v = 0; v < n; ++v) a.vertex_sets[i].bits[v] = code >> at++ & 1;
    }
    for (int j = 0; j < spec.q1(); ++j) {
      a.edge_sets.push_back(EdgeSet::of(m));
      for (int e = 0; e < m; ++e) a.edge_sets[j].bits[e] = code >> at++ & 1;
    }
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) ok = eval_cml(inst, a, v, spec.matrix);
    if (!ok) continue;
    ArithEnv env = constant_env(inst, spec);
    for (int i = 0; i < spec.p1(); ++i) {
      env[detail::quant_card(true, i)] = a.vertex_sets[i].size();
      env[detail::quant_cc(true, i)] = connected_components(g, a.vertex_sets[i]);
    }
    for (int j = 0; j < spec.q1(); ++j) {
      env[detail::quant_card(false, j)] = a.edge_sets[j].size();
      env[detail::quant_cc(false, j)] = connected_components(g, a.edge_sets[j]);
    }
    if (eval_arith(spec.constraint(), env)) total += 1;
  }
  return total;
}

}  // namespace

TEST_CASE("oracle examples") {
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  auto vc = make_problem("vertex-cover");
  CHECK(brute_force_count({k3, {}, {}, {2}}, vc) == 3);
  CHECK(brute_force_count({Graph(2, {{0, 1}}), {}, {}, {1}}, vc) == 2);
  CHECK(brute_force_count({Graph(3, {}), {}, {}, {0}}, vc) == 1);
  CHECK(brute_force_count({Graph(0, {}), {}, {}, {0}}, vc) == 1);

  auto st = make_problem("steiner-tree");
  CHECK(brute_force_decide({k3, {VertexSet::of(3, {0, 1})}, {}, {1}}, st));
  auto cvc = make_problem("connected-vertex-cover");
  Graph p3(3, {{0, 1}, {1, 2}});
  CHECK(brute_force_decide({p3, {}, {}, {1}}, cvc));
  CHECK_FALSE(brute_force_decide({Graph(4, {{0, 1}, {1, 2}, {2, 3}}), {}, {}, {1}}, cvc));
  auto lc = make_problem("longest-cycle-undirected");
  CHECK_FALSE(brute_force_decide({Graph(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}), {}, {}, {1}}, lc));

  Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(brute_force_count({star, {}, {}, {1}}, make_problem("r-dominating-set(1)")) == 1);
}

TEST_CASE("pruned search agrees with plain enumeration") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 150; ++t) {
    bool directed = t % 3 == 0;
    auto spec = parse_problem(testing::random_problem_source(rng, 2, directed));
    int n = 1 + static_cast<int>(rng() % 4);
    Graph g = testing::random_graph(n, 0.5, rng, directed);
    if (2 * n + g.num_edges() > 22) continue;
    Instance inst{g, {VertexSet::of(n)}, {}, {}};
    for (int v = 0; v < n; ++v) inst.fixed_vertex_sets[0].bits[v] = rng() & 1;
    INFO(to_dsl(spec) << write_pace_gr(g));
    REQUIRE(brute_force_count(inst, spec) == naive_count(inst, spec));
  }
  std::vector<std::string> names = {"connected-vertex-cover", "min-cycle-cover-undirected", "longest-path-undirected",
                                    "exact-k-leaf-spanning-tree"};
  for (const auto& name : names) {
    auto spec = make_problem(name);
    for (int t = 0; t < 10; ++t) {
      Graph g = testing::random_graph(4, 0.6, rng);
      for (int k = 0; k <= 4; ++k) REQUIRE(brute_force_count({g, {}, {}, {k}}, spec) == naive_count({g, {}, {}, {k}}, spec));
    }
  }
}

TEST_CASE("profiles reproduce direct counts for every parameter") {
  std::mt19937_64 rng(42);
  auto spec = make_problem("connected-dominating-set");
  for (int t = 0; t < 20; ++t) {
    Graph g = testing::random_graph(6, 0.4, rng);
    Instance inst{g, {}, {}, {0}};
    auto prof = oracle_profile(inst, spec);
    for (int k = 0; k <= 6; ++k) {
      inst.params = {k};
      REQUIRE(profile_count(prof, inst, spec) == brute_force_count(inst, spec));
    }
  }
}

TEST_CASE("oracle budget") {
  std::vector<Edge> edges;
  for (int u = 0; u < 8; ++u)
    for (int v = u + 1; v < 8; ++v) edges.push_back({u, v});
  OracleOptions opts;
  opts.budget = 1000;
  CHECK_THROWS_AS(brute_force_count({Graph(8, edges), {}, {}, {3}}, make_problem("graph-metric-tsp"), opts), BudgetExceeded);
}

TEST_CASE("cuts double per unmarked component") {
  Graph g(7, {{0, 1}, {2, 3}, {3, 4}});
  VertexSet x = VertexSet::of(7, {0, 1, 2, 3, 4, 5});
  CHECK(count_cuts(g, x, VertexSet::of(7, {0, 2, 5})) == 1);
  CHECK(count_cuts(g, x, VertexSet::of(7, {0, 2})) == 2);
  CHECK(count_cuts(g, x, VertexSet::of(7, {0})) == 4);
  CHECK(count_cuts(g, x, VertexSet::of(7)) == 8);
  CHECK(count_cuts(g, x, VertexSet::of(7, {0, 1})) == 4);
  Graph p4(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(count_cuts(p4, EdgeSet::of(3, {0, 2}), EdgeSet::of(3)) == 4);
  CHECK(count_cuts(p4, EdgeSet::of(3, {0, 2}), EdgeSet::of(3, {2})) == 2);
  CHECK(count_cuts(p4, EdgeSet::of(3, {0, 1, 2}), EdgeSet::of(3, {1})) == 1);
}
