#include <queue>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace ecml;

TEST_CASE("pace gr parsing") {
  auto k3 = parse_graph("p tw 3 3\n1 2\n2 3\n1 3\n", GraphFormat::PaceGr);
  CHECK(k3.num_vertices() == 3);
  CHECK(k3.num_edges() == 3);
  CHECK_FALSE(k3.directed());

  auto two = parse_graph("c two isolated vertices\np tw 2 0\n", GraphFormat::PaceGr);
  CHECK(two.num_vertices() == 2);
  CHECK(two.num_edges() == 0);

  auto arc = parse_graph("p dtw 2 1\n2 1\n", GraphFormat::PaceGr);
  CHECK(arc.directed());
  CHECK(arc.edge(0).u == 1);
  CHECK(arc.edge(0).v == 0);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text, GraphFormat f) {
    try {
      parse_graph(text, f);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };
  CHECK(line_of("p tw 3 2\n1 2\n2 x\n", GraphFormat::PaceGr) == 3);
  CHECK(line_of("p tw 3 1\n1 4\n", GraphFormat::PaceGr) == 2);
  CHECK(line_of("1 2\n2 3\n1 2\n", GraphFormat::EdgeList) == 3);
  CHECK(line_of("1 1\n", GraphFormat::EdgeList) == 1);
  CHECK_THROWS_AS(parse_graph("p tw 2 1\n1 1\n", GraphFormat::PaceGr), ParseError);
}

TEST_CASE("edge lists name vertices in order of appearance") {
  auto g = parse_graph("# comment\ndirected\nb a\na c\n", GraphFormat::EdgeList);
  CHECK(g.directed());
  CHECK(g.num_vertices() == 3);
  CHECK(g.edge(0).u == 0);
  CHECK(g.edge(0).v == 1);
}

TEST_CASE("write and re-read a pace graph") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    Graph g = testing::random_graph(7, 0.4, rng, t % 2 == 1);
    Graph h = parse_graph(write_pace_gr(g), GraphFormat::PaceGr);
    CHECK(h.directed() == g.directed());
    CHECK(h.edges() == g.edges());
  }
}

TEST_CASE("graph constructor rejects loops and duplicates") {
  CHECK_THROWS_AS(Graph(2, {{0, 0}}), Error);
  CHECK_THROWS_AS(Graph(2, {{0, 1}, {1, 0}}), Error);
  CHECK_NOTHROW(Graph(2, {{0, 1}, {1, 0}}, true));
  CHECK_THROWS_AS(Graph(2, {{0, 2}}), Error);
}

TEST_CASE("connected components examples") {
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(connected_components(k3, VertexSet::of(3, {0, 1, 2})) == 1);
  CHECK(connected_components(k3, VertexSet::of(3)) == 0);
  Graph p4(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(connected_components(p4, EdgeSet::of(3, {0, 2})) == 2);
  CHECK(connected_components(p4, EdgeSet::of(3)) == 0);
  CHECK(connected_components(p4, VertexSet::of(4, {0, 2, 3})) == 2);
}

namespace {

int bfs_components(const Graph& g, const VertexSet& x) {
  std::vector<bool> seen(g.num_vertices(), false);
  int comps = 0;
  for (int s = 0; s < g.num_vertices(); ++s) {
    if (!x.contains(s) || seen[s]) continue;
    ++comps;
    std::queue<int> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [e, w] : g.incident(u))
        if (x.contains(w) && !seen[w]) seen[w] = true, q.push(w);
    }
  }
  return comps;
}

}  // namespace

TEST_CASE("vertex-set components agree with BFS on random graphs") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    int n = 1 + static_cast<int>(rng() % 12);
    Graph g = testing::random_graph(n, 0.25, rng, t % 3 == 0);
    VertexSet x = VertexSet::of(n);
    for (int v = 0; v < n; ++v) x.bits[v] = rng() & 1;
    REQUIRE(connected_components(g, x) == bfs_components(g, x));
  }
}

TEST_CASE("edge-set components count the touched vertices only") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 300; ++t) {
    int n = 2 + static_cast<int>(rng() % 9);
    Graph g = testing::random_graph(n, 0.4, rng);
    EdgeSet y = EdgeSet::of(g.num_edges());
    VertexSet touched = VertexSet::of(n);
    std::vector<Edge> kept;
    for (int e = 0; e < g.num_edges(); ++e)
      if (rng() & 1) {
        y.bits[e] = true;
        touched.bits[g.edge(e).u] = touched.bits[g.edge(e).v] = true;
        kept.push_back(g.edge(e));
      }
    REQUIRE(connected_components(g, y) == bfs_components(Graph(n, kept), touched));
  }
}
