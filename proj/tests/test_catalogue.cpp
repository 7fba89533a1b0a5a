#include "catch_amalgamated.hpp"
#include "checkers.hpp"
#include "support.hpp"

using namespace ecml;

TEST_CASE("catalogue formulas") {
  using namespace cml;
  auto vc = make_problem("vertex-cover");
  CHECK(formula_equal(vc.matrix, implies(lnot(vertex_set(0)), box(vertex_set(0)))));
  CHECK(to_dsl(vc).find("|X| <= k") != std::string::npos);

  auto st = make_problem("steiner-tree");
  CHECK(formula_equal(st.matrix, implies(vertex_set(0, true), vertex_set(0))));
  CHECK(st.vertex_cc == std::vector<bool>{true});
  CHECK(st.p0() == 1);

  auto fvs = make_problem("feedback-vertex-set");
  CHECK(fvs.p1() == 2);
  CHECK(fvs.q1() == 1);
  CHECK(fvs.edge_cc == std::vector<bool>{true});
  CHECK(to_dsl(fvs).find("cc(Y) + |Y| + |Z| + |X| <= |V|") != std::string::npos);
}

TEST_CASE("catalogue names") {
  auto names = catalogue_names();
  CHECK(names.size() == 18);
  for (const auto& name : names) CHECK_NOTHROW(make_problem(name));
  CHECK(make_problem("r-dominating-set").name == "r-dominating-set(1)");
  CHECK(modal_depth(make_problem("r-dominating-set(3)").matrix) == 3);
  CHECK_THROWS_AS(make_problem("r-dominating-set(0)"), SpecError);
  CHECK_THROWS_AS(make_problem("r-dominating-set(x)"), SpecError);
  CHECK_THROWS_AS(make_problem("hamiltonian-path"), SpecError);
  for (const auto& name : {"min-cycle-cover-directed", "longest-path-directed", "longest-cycle-directed", "exact-k-leaf-outbranching"})
    CHECK(make_problem(name).directed);
}

TEST_CASE("r-dominating sets reach distance r") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 30; ++t) {
    Graph g = testing::random_graph(7, 0.3, rng);
    int r = 1 + t % 3;
    // dist(v, X) <= r for every v, by BFS from X
    long long expected = 0;
    for (unsigned x = 0; x < 128; ++x) {
      if (__builtin_popcount(x) > 2) continue;
      std::vector<int> dist(7, -1);
      std::vector<int> frontier;
      for (int v = 0; v < 7; ++v)
        if (x >> v & 1) dist[v] = 0, frontier.push_back(v);
      for (int step = 1; step <= r; ++step) {
        std::vector<int> next;
        for (int u : frontier)
          for (auto [e, w] : g.incident(u))
            if (dist[w] < 0) dist[w] = step, next.push_back(w);
        frontier = next;
      }
      expected += std::count(dist.begin(), dist.end(), -1) == 0;
    }
    auto spec = make_problem("r-dominating-set(" + std::to_string(r) + ")");
    REQUIRE(count_solutions({g, {}, {}, {2}}, testing::nice_of(g), spec) == expected);
  }
}

TEST_CASE("catalogue semantics on small graphs") {
  std::mt19937_64 rng(72);
  for (const auto& name : catalogue_names()) {
    auto spec = make_problem(name);
    for (int t = 0; t < 12; ++t) {
      int n = 1 + static_cast<int>(rng() % (spec.directed ? 4 : 5));
      Graph g = testing::random_graph(n, 0.5, rng, spec.directed);
      Instance inst{g, {}, {}, {0}};
      unsigned fixed = 0;
      if (spec.p0() == 1) {
        fixed = name == "steiner-tree" ? (1u | 1u << (n - 1)) : 1u;
        inst.fixed_vertex_sets.push_back(VertexSet::of(n));
        for (int v = 0; v < n; ++v) inst.fixed_vertex_sets[0].bits[v] = fixed >> v & 1;
      }
      auto prof = oracle_profile(inst, spec);
      for (int k = 0; k <= 2 * n + 1; ++k) {
        inst.params = {k};
        INFO(name << " k=" << k << "\n" << write_pace_gr(g));
        REQUIRE((profile_count(prof, inst, spec) > 0) == checkers::decide(name, g, k, fixed));
      }
    }
  }
}
