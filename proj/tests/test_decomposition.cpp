#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace ecml;

TEST_CASE("validation examples") {
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  auto r = validate_decomposition(k3, TreeDecomposition{{{0, 1, 2}}, {}});
  CHECK(r.valid());
  CHECK(r.width == 2);

  Graph p3(3, {{0, 1}, {1, 2}});
  CHECK(validate_decomposition(p3, {{{0, 1}, {1, 2}}, {{0, 1}}}).width == 1);
  CHECK(validate_decomposition(p3, {{{0, 1}, {1, 2}}, {{0, 1}}}).valid());

  auto broken = validate_decomposition(p3, {{{0, 1}, {2}}, {{0, 1}}});
  REQUIRE_FALSE(broken.valid());
  bool uncovered_edge = false;
  for (const auto& v : broken.violations)
    if (v.kind == Violation::Kind::UncoveredEdge) uncovered_edge = v.witness == std::vector<int>{1, 1, 2};
  CHECK(uncovered_edge);

  auto split = validate_decomposition(p3, {{{0, 1}, {2}, {0, 2}}, {{0, 1}, {1, 2}}});
  CHECK_FALSE(split.valid());
  CHECK_FALSE(validate_decomposition(p3, {{{0, 1}, {1, 2}}, {}}).valid());
}

TEST_CASE("nice decomposition of a single edge") {
  Graph e(2, {{0, 1}});
  auto nd = make_nice(e, TreeDecomposition{{{0, 1}}, {}});
  std::vector<NiceKind> kinds;
  for (const auto& n : nd.nodes) kinds.push_back(n.kind);
  CHECK(kinds == std::vector<NiceKind>{NiceKind::Leaf, NiceKind::IntroduceVertex, NiceKind::IntroduceVertex,
                                       NiceKind::IntroduceEdge, NiceKind::Forget, NiceKind::Forget});
  CHECK(nd.width() == 1);
  CHECK(nd.nodes[nd.root].bag.empty());
}

TEST_CASE("K3 gets exactly three introduce-edge nodes") {
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  auto nd = make_nice(k3, TreeDecomposition{{{0, 1, 2}}, {}});
  int intro = 0;
  for (const auto& n : nd.nodes) intro += n.kind == NiceKind::IntroduceEdge;
  CHECK(intro == 3);
  CHECK(check_nice(k3, nd).empty());
}

TEST_CASE("nice invariants on random graphs") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    int n = static_cast<int>(rng() % 11);
    Graph g = testing::random_graph(n, 0.35, rng, t % 4 == 0);
    auto td = greedy_decomposition(g, t % 2 ? Elimination::MinDegree : Elimination::MinFill);
    REQUIRE(validate_decomposition(g, td).valid());
    auto nd = make_nice(g, td);
    INFO("graph " << write_pace_gr(g));
    REQUIRE(check_nice(g, nd).empty());
    REQUIRE(nd.width() == td.width());
    int intro = 0;
    for (const auto& x : nd.nodes) {
      intro += x.kind == NiceKind::IntroduceEdge;
      if (x.kind == NiceKind::Join) {
        REQUIRE(x.children.size() == 2);
        REQUIRE(nd.nodes[x.children[0]].bag == x.bag);
        REQUIRE(nd.nodes[x.children[1]].bag == x.bag);
      }
    }
    REQUIRE(intro == g.num_edges());
  }
}

TEST_CASE("greedy widths") {
  std::vector<Edge> tree;
  for (int v = 1; v < 15; ++v) tree.push_back({(v - 1) / 2, v});
  CHECK(greedy_decomposition(Graph(15, tree)).width() == 1);
  for (int n = 1; n <= 7; ++n) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
    CHECK(greedy_decomposition(Graph(n, edges)).width() == n - 1);
  }
  Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(greedy_decomposition(c4).width() == 2);
  CHECK(greedy_decomposition(c4, Elimination::MinDegree).width() == 2);
}

TEST_CASE("partial k-trees come with valid decompositions") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    auto pk = testing::random_partial_ktree(20, 3, 0.7, rng);
    auto r = validate_decomposition(pk.graph, pk.td);
    REQUIRE(r.valid());
    REQUIRE(r.width == 3);
  }
}

TEST_CASE("td files round-trip") {
  Graph p3(3, {{0, 1}, {1, 2}});
  TreeDecomposition td{{{0, 1}, {1, 2}}, {{0, 1}}};
  std::string text = write_td(td, 3);
  CHECK(text.rfind("s td 2 2 3", 0) == 0);
  auto back = parse_td(text);
  CHECK(back.bags == td.bags);
  CHECK(back.tree_edges == td.tree_edges);
  CHECK_THROWS_AS(parse_td("s td 1 2 3\nb 2 1\n"), ParseError);
}

TEST_CASE("nice decompositions serialize to json") {
  std::mt19937_64 rng(9);
  Graph g = testing::random_graph(8, 0.4, rng);
  auto nd = testing::nice_of(g);
  CHECK(nice_from_json(to_json(nd)) == nd);
}
