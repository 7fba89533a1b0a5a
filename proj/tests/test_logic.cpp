#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace ecml;

namespace {

Assignment random_assignment(const Graph& g, int p1, int q1, std::mt19937_64& rng) {
  Assignment a;
  for (int i = 0; i < p1; ++i) {
    a.vertex_sets.push_back(VertexSet::of(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) a.vertex_sets.back().bits[v] = rng() & 1;
  }
  for (int j = 0; j < q1; ++j) {
    a.edge_sets.push_back(EdgeSet::of(g.num_edges()));
    for (int e = 0; e < g.num_edges(); ++e) a.edge_sets.back().bits[e] = rng() & 1;
  }
  return a;
}

ArithEnv env_for(const ProblemSpec& spec, const Instance& inst, const std::vector<int>& cards, const std::vector<int>& ccs) {
  ArithEnv env = constant_env(inst, spec);
  std::size_t at = 0;
  for (int i = 0; i < spec.p1(); ++i) env[detail::quant_card(true, i)] = cards.at(at++);
  for (int j = 0; j < spec.q1(); ++j) env[detail::quant_card(false, j)] = cards.at(at++);
  // ccs lists the tracked sets only, vertex sets first
  at = 0;
  for (int i = 0; i < spec.p1(); ++i)
    if (spec.vertex_cc[i]) env[detail::quant_cc(true, i)] = ccs.at(at++);
  for (int j = 0; j < spec.q1(); ++j)
    if (spec.edge_cc[j]) env[detail::quant_cc(false, j)] = ccs.at(at++);
  return env;
}

}  // namespace

TEST_CASE("vertex cover source") {
  auto spec = parse_problem(R"(problem "vc"
param k
exists vertexset X
require |X| <= k
formula: !X -> box(X)
)");
  CHECK(spec.p1() == 1);
  CHECK(spec.q1() == 0);
  using namespace cml;
  CHECK(formula_equal(spec.matrix, implies(lnot(vertex_set(0)), box(vertex_set(0)))));
  CHECK_FALSE(spec.has_connectivity());
}

TEST_CASE("specification errors") {
  CHECK_THROWS_AS(parse_problem("problem \"t\"\nexists vertexset X\nrequire cc(X) >= 2\nformula: X\n"), SpecError);
  CHECK_THROWS_AS(parse_problem("problem \"t\"\nexists vertexset X\nrequire 0 - cc(X) <= 2\nformula: X\n"), SpecError);
  CHECK_THROWS_AS(parse_problem("problem \"t\"\nexists edgeset Y\nformula: Y\n"), SpecError);
  CHECK_THROWS_AS(parse_problem("problem \"t\"\ndirected\nexists vertexset X\nformula: X & up\n"), SpecError);
  CHECK_THROWS_AS(parse_problem("problem \"t\"\nexists vertexset X\nformula: W\n"), SpecError);
  CHECK_THROWS_AS(parse_problem("problem \"t\"\nexists vertexset X\nformula: diamond[prime](X)\n"), Error);
  CHECK_NOTHROW(parse_problem("problem \"t\"\nexists vertexset X\nrequire cc(X) <= 2\nformula: X\n"));
}

TEST_CASE("box elimination examples") {
  using namespace cml;
  auto x = vertex_set(0);
  CHECK(formula_equal(eliminate_boxes(box(x)), lnot(diamond(lnot(x)))));
  auto dy = diamond(edge_set(0));
  CHECK(formula_equal(eliminate_boxes(dy), dy));
  CHECK(formula_equal(eliminate_boxes(box(box(x))), lnot(diamond(lnot(lnot(diamond(lnot(x))))))));
}

TEST_CASE("box elimination preserves truth on random formulas") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 500; ++t) {
    bool directed = t % 2;
    auto spec = parse_problem(testing::random_problem_source(rng, 2, directed));
    Formula plain = eliminate_boxes(spec.matrix);
    REQUIRE(count_ops(plain, FormulaOp::Box) == 0);
    REQUIRE(modal_depth(plain) == modal_depth(spec.matrix));
    int n = 1 + static_cast<int>(rng() % 5);
    Instance inst{testing::random_graph(n, 0.5, rng, directed), {VertexSet::of(n)}, {}, {}};
    for (int v = 0; v < n; ++v) inst.fixed_vertex_sets[0].bits[v] = rng() & 1;
    for (int s = 0; s < 4; ++s) {
      Assignment a = random_assignment(inst.graph, 2, 1, rng);
      for (int v = 0; v < n; ++v) REQUIRE(eval_cml(inst, a, v, plain) == eval_cml(inst, a, v, spec.matrix));
    }
  }
}

TEST_CASE("evaluation examples") {
  using namespace cml;
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  Instance inst{k3, {}, {}, {}};
  Assignment a{{VertexSet::of(3, {0, 1})}, {}};
  auto vc = implies(lnot(vertex_set(0)), box(vertex_set(0)));
  CHECK(eval_cml(inst, a, 2, vc));
  Assignment lone{{VertexSet::of(3, {0})}, {}};
  CHECK_FALSE(eval_cml(inst, lone, 2, vc));

  Graph arc(2, {{0, 1}}, true);
  Instance ai{arc, {}, {}, {}};
  Assignment none;
  CHECK(eval_cml(ai, none, 1, diamond(down())) == false);
  CHECK(eval_cml(ai, none, 1, diamond(up())));
  CHECK(eval_cml(ai, none, 0, diamond(down())));
  CHECK_FALSE(eval_cml(ai, none, 0, diamond(up())));

  Graph p3(3, {{0, 1}, {1, 2}});
  Instance pi{p3, {}, {}, {}};
  Assignment y{{}, {EdgeSet::of(2, {0})}};
  CHECK(eval_cml(pi, y, 1, diamond(upset_parse("{1}"), edge_set(0))));
  CHECK_FALSE(eval_cml(pi, y, 1, diamond(upset_parse("{2}"), edge_set(0))));
}

TEST_CASE("diamond counts neighbours in simple undirected graphs") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 200; ++t) {
    int n = 1 + static_cast<int>(rng() % 7);
    Graph g = testing::random_graph(n, 0.5, rng);
    Instance inst{g, {}, {}, {}};
    Assignment a = random_assignment(g, 1, 0, rng);
    UPSet s = testing::random_upset(rng);
    auto f = cml::diamond(s, cml::vertex_set(0));
    for (int v = 0; v < n; ++v) {
      int neighbours = 0;
      for (auto [e, w] : g.incident(v)) neighbours += a.vertex_sets[0].contains(w);
      REQUIRE(eval_cml(inst, a, v, f) == s.contains(neighbours));
    }
  }
}

TEST_CASE("side condition examples") {
  Instance k4{Graph(4, {}), {}, {}, {2}};
  auto vc = make_problem("vertex-cover");
  CHECK(eval_arith(vc.constraint(), env_for(vc, k4, {2}, {})));
  CHECK_FALSE(eval_arith(vc.constraint(), env_for(vc, k4, {3}, {})));

  auto tsp = make_problem("graph-metric-tsp");
  Instance t3{Graph(3, {}), {}, {}, {3}};
  CHECK(eval_arith(tsp.constraint(), env_for(tsp, t3, {2, 1, 1}, {1})));
  CHECK_FALSE(eval_arith(tsp.constraint(), env_for(tsp, t3, {2, 0, 2}, {1})));

  auto fvs = make_problem("feedback-vertex-set");
  Instance f4{Graph(4, {}), {}, {}, {1}};
  // X, Z, Y with |X|=1, |Z|=0, |Y|=2, cc(Y)=1
  CHECK(eval_arith(fvs.constraint(), env_for(fvs, f4, {1, 0, 2}, {1})));
  CHECK_FALSE(eval_arith(fvs.constraint(), env_for(fvs, f4, {1, 0, 3}, {1})));
}

TEST_CASE("sources round-trip through the printer") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 300; ++t) {
    auto spec = parse_problem(testing::random_problem_source(rng, 2, t % 2));
    auto back = parse_problem(to_dsl(spec));
    REQUIRE(spec_equal(spec, back));
  }
  for (const auto& name : catalogue_names()) {
    auto spec = make_problem(name);
    INFO(name);
    REQUIRE(spec_equal(spec, parse_problem(to_dsl(spec))));
  }
}

TEST_CASE("bindings") {
  Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  auto st = make_problem("steiner-tree");
  auto inst = bind_instance(k3, st, nlohmann::json::parse(R"({"params": {"k": 1}, "fixed": {"T": [0, 1]}})"));
  CHECK(inst.params == std::vector<std::int64_t>{1});
  CHECK(inst.fixed_vertex_sets[0] == VertexSet::of(3, {0, 1}));
  CHECK_THROWS_AS(bind_instance(k3, st, nlohmann::json::parse(R"({"params": {"q": 1}})")), Error);
  CHECK_THROWS_AS(bind_instance(k3, st, nlohmann::json::parse(R"({"fixed": {"T": [7]}})")), Error);
  CHECK_THROWS_AS(bind_instance(k3, make_problem("longest-cycle-directed"), nlohmann::json::object()), SpecError);
}
