#include <cmath>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace ecml;

TEST_CASE("counting examples") {
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  auto vc = make_problem("vertex-cover");
  CHECK(count_solutions({k3, {}, {}, {2}}, make_nice(k3, {{{0, 1, 2}}, {}}), vc) == 3);
  CHECK(count_solutions({k3, {}, {}, {2}}, testing::nice_of(k3), vc) == 3);
  Graph edge(2, {{0, 1}});
  CHECK(count_solutions({edge, {}, {}, {1}}, testing::nice_of(edge), vc) == 2);
  Graph empty3(3, {});
  CHECK(count_solutions({empty3, {}, {}, {0}}, testing::nice_of(empty3), vc) == 1);
  Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(count_solutions({star, {}, {}, {1}}, testing::nice_of(star), make_problem("r-dominating-set(1)")) == 1);
}

TEST_CASE("graphs without vertices") {
  Graph none(0, {});
  auto nd = testing::nice_of(none);
  CHECK(count_solutions({none, {}, {}, {0}}, nd, make_problem("vertex-cover")) == 1);
  auto needs_one = parse_problem("problem \"t\"\nexists vertexset X\nrequire |X| >= 1\nformula: X\n");
  CHECK(count_solutions({none, {}, {}, {}}, nd, needs_one) == 0);
}

TEST_CASE("branch enumeration") {
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  auto vc = enumerate_branches({k3, {}, {}, {2}}, make_problem("vertex-cover"));
  REQUIRE(vc.size() == 3);
  for (int x = 0; x < 3; ++x) CHECK(vc[x].x == std::vector<int>{x});

  auto bare = enumerate_branches({k3, {VertexSet::of(3)}, {}, {}}, parse_problem("problem \"t\"\nfixed vertexset F\nformula: F | !F\n"));
  REQUIRE(bare.size() == 1);
  CHECK(bare[0].x.empty());
  CHECK(bare[0].y.empty());

  // (y, y1, y2) with y1 + 2 y2 <= 3 and every coordinate at most |E| = 3
  auto tsp = enumerate_branches({k3, {}, {}, {3}}, make_problem("graph-metric-tsp"));
  std::set<std::vector<int>> got, want;
  for (const auto& b : tsp) {
    got.insert(b.y);
    CHECK(b.cy[0] == (b.y[0] > 0 ? 1 : 0));
  }
  for (int y = 0; y <= 3; ++y)
    for (int y1 = 0; y1 <= 3; ++y1)
      for (int y2 = 0; y2 <= 3; ++y2)
        if (y1 + 2 * y2 <= 3) want.insert({y, y1, y2});
  CHECK(got == want);
  CHECK(tsp.size() == want.size());
}

TEST_CASE("dynamic program agrees with the oracle on random problems") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 300; ++t) {
    bool directed = t % 3 == 0;
    auto spec = parse_problem(testing::random_problem_source(rng, 2, directed));
    int n = static_cast<int>(rng() % 6);
    Graph g = testing::random_graph(n, 0.45, rng, directed);
    Instance inst{g, {VertexSet::of(n)}, {}, {}};
    for (int v = 0; v < n; ++v) inst.fixed_vertex_sets[0].bits[v] = rng() & 1;
    auto nd = testing::nice_of(g);
    INFO(to_dsl(spec) << write_pace_gr(g));
    BigInt expected = brute_force_count(inst, spec);
    REQUIRE(count_solutions(inst, nd, spec) == expected);
    detail::DpOptions eager;
    eager.lazy_predictions = false;
    REQUIRE(count_solutions(inst, nd, spec, eager) == expected);
  }
}

TEST_CASE("fixed edge sets") {
  auto spec = parse_problem("problem \"t\"\nparam k\nfixed edgeset F\nexists vertexset X\nrequire |X| <= k\nformula: !X -> diamond(F & X)\n");
  std::mt19937_64 rng(52);
  for (int t = 0; t < 40; ++t) {
    Graph g = testing::random_graph(6, 0.5, rng);
    Instance inst{g, {}, {EdgeSet::of(g.num_edges())}, {3}};
    for (int e = 0; e < g.num_edges(); ++e) inst.fixed_edge_sets[0].bits[e] = rng() & 1;
    REQUIRE(count_solutions(inst, testing::nice_of(g), spec) == brute_force_count(inst, spec));
  }
}

TEST_CASE("join children can be swapped") {
  std::mt19937_64 rng(53);
  auto spec = make_problem("r-dominating-set(2)");
  for (int t = 0; t < 40; ++t) {
    auto pk = testing::random_partial_ktree(10, 2, 0.7, rng);
    auto nd = make_nice(pk.graph, pk.td);
    auto swapped = nd;
    for (auto& node : swapped.nodes)
      if (node.kind == NiceKind::Join) std::swap(node.children[0], node.children[1]);
    Instance inst{pk.graph, {}, {}, {4}};
    REQUIRE(count_solutions(inst, swapped, spec) == count_solutions(inst, nd, spec));
  }
}

TEST_CASE("information size") {
  // one diamond over ">=1" (carrier 2), l = 1, p1 = 1
  CHECK(information_size(make_problem("vertex-cover")) == 2 * 2 * 2);
  // diamond over {2} has carrier 4; X, one diamond
  CHECK(information_size(parse_problem("problem \"t\"\nexists vertexset X\nformula: diamond[{2}](X)\n")) == 4 * 2 * 2);
  // depth-2 dominating set: two diamonds over ">=1"
  CHECK(information_size(make_problem("r-dominating-set(2)")) == 2 * 2 * 4 * 2);
}

TEST_CASE("table sizes stay within the information bound") {
  std::mt19937_64 rng(54);
  auto spec = make_problem("r-dominating-set(2)");
  auto pk = testing::random_partial_ktree(14, 2, 0.8, rng);
  auto res = count_with_stats({pk.graph, {}, {}, {14}}, make_nice(pk.graph, pk.td), spec);
  const double per_vertex = static_cast<double>(information_size(spec));
  for (const auto& s : res.stats) {
    // |I|^bag states times at most 15 accumulator values for |X| <= 14
    REQUIRE(static_cast<double>(s.entries) <= std::pow(per_vertex, s.bag_size) * 15);
  }
  CHECK(table_sizes_json(res.stats).size() == res.stats.size());
}

TEST_CASE("counting refuses connectivity and honours the budget") {
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  auto nd = testing::nice_of(k3);
  CHECK_THROWS_AS(count_solutions({k3, {}, {}, {2}}, nd, make_problem("connected-vertex-cover")), SpecError);
  detail::DpOptions tight;
  tight.max_entries = 1;
  CHECK_THROWS_AS(count_solutions({k3, {}, {}, {2}}, nd, make_problem("vertex-cover"), tight), BudgetExceeded);
  NiceDecomposition broken = nd;
  broken.nodes.pop_back();
  broken.root = static_cast<int>(broken.nodes.size()) - 1;
  CHECK_THROWS_AS(count_solutions({k3, {}, {}, {2}}, broken, make_problem("vertex-cover")), Error);
}

TEST_CASE("counts do not depend on the decomposition") {
  std::mt19937_64 rng(55);
  std::vector<std::string> names = {"vertex-cover", "r-dominating-set(1)", "r-dominating-set(2)"};
  for (int t = 0; t < 60; ++t) {
    int n = 4 + static_cast<int>(rng() % 9);
    Graph g = testing::random_graph(n, 0.3, rng);
    auto a = make_nice(g, greedy_decomposition(g, Elimination::MinFill));
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    auto td = decomposition_from_order(g, order);
    if (td.width() > 5) continue;
    auto b = make_nice(g, td);
    for (const auto& name : names) {
      Instance inst{g, {}, {}, {n / 2}};
      REQUIRE(count_solutions(inst, a, make_problem(name)) == count_solutions(inst, b, make_problem(name)));
    }
  }
}
