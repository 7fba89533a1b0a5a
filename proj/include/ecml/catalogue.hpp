#pragma once

#include <map>
#include <string>
#include <vector>

#include "ecml/error.hpp"
#include "ecml/problem.hpp"

namespace ecml {

namespace detail {

inline const std::map<std::string, std::string>& catalogue_sources() {
  static const std::map<std::string, std::string> src = {
      {"vertex-cover", R"(problem "vertex-cover"
param k
exists vertexset X
require |X| <= k
formula: !X -> box(X)
)"},
      {"steiner-tree", R"(problem "steiner-tree"
param k
fixed vertexset T
exists vertexset X
require cc(X) <= 1 and |X| <= k + |T|
formula: T -> X
)"},
      {"feedback-vertex-set", R"(problem "feedback-vertex-set"
param k
exists vertexset X, Z
exists edgeset Y
require cc(Y) + |Y| + |Z| + |X| <= |V| and |X| <= k
formula: (Z <-> (!X & box(X))) & (X -> box(!Y)) & (!X -> box(!X -> Y))
)"},
      {"connected-vertex-cover", R"(problem "connected-vertex-cover"
param k
exists vertexset X
require cc(X) <= 1 and |X| <= k
formula: !X -> box(X)
)"},
      {"connected-dominating-set", R"(problem "connected-dominating-set"
param k
exists vertexset X
require cc(X) <= 1 and |X| <= k
formula: !X -> diamond(X)
)"},
      {"connected-feedback-vertex-set", R"(problem "connected-feedback-vertex-set"
param k
exists vertexset X, Z
exists edgeset Y
require cc(Y) + |Y| + |Z| + |X| <= |V| and cc(X) <= 1 and |X| <= k
formula: (Z <-> (!X & box(X))) & (X -> box(!Y)) & (!X -> box(!X -> Y))
)"},
      {"connected-odd-cycle-transversal", R"(problem "connected-odd-cycle-transversal"
param k
exists vertexset X, L, R
require cc(X) <= 1 and |X| <= k
formula: (L | R | X) & !(L & R) & !(R & X) & !(X & L)
       & (L -> box(R | X)) & (R -> box(L | X))
)"},
      {"min-cycle-cover-undirected", R"(problem "min-cycle-cover-undirected"
param k
exists edgeset Y
require cc(Y) <= k
formula: diamond[{2}](Y)
)"},
      {"min-cycle-cover-directed", R"(problem "min-cycle-cover-directed"
directed
param k
exists edgeset Y
require cc(Y) <= k
formula: diamond[{1}](Y & up) & diamond[{1}](Y & down)
)"},
      {"longest-path-undirected", R"(problem "longest-path-undirected"
param k
exists vertexset A
exists edgeset Y
require cc(Y) <= 1 and |A| == 2 and |Y| >= k
formula: (A -> diamond[{1}](Y)) & (!A -> diamond[{0,2}](Y))
)"},
      {"longest-path-directed", R"(problem "longest-path-directed"
directed
param k
exists vertexset A, B
exists edgeset Y
require cc(Y) <= 1 and |A| == 1 and |B| == 1 and |Y| >= k
formula: (A -> (!B & diamond[{1}](Y) & diamond[{1}](Y & down)))
       & (B -> (!A & diamond[{1}](Y) & diamond[{1}](Y & up)))
       & ((!A & !B) -> (!diamond(Y) | (diamond[{1}](Y & down) & diamond[{1}](Y & up))))
)"},
      {"longest-cycle-undirected", R"(problem "longest-cycle-undirected"
param k
exists edgeset Y
require cc(Y) <= 1 and |Y| >= k
formula: diamond[{0,2}](Y)
)"},
      {"longest-cycle-directed", R"(problem "longest-cycle-directed"
directed
param k
exists edgeset Y
require cc(Y) <= 1 and |Y| >= k
formula: !diamond(Y) | (diamond[{1}](Y & down) & diamond[{1}](Y & up))
)"},
      {"exact-k-leaf-spanning-tree", R"(problem "exact-k-leaf-spanning-tree"
param k
exists vertexset L
exists edgeset T
require cc(T) <= 1 and |L| == k and |T| == |V| - 1
formula: diamond(T) & (L <-> diamond[{1}](T))
)"},
      {"exact-k-leaf-outbranching", R"(problem "exact-k-leaf-outbranching"
directed
param k
fixed vertexset R
exists vertexset L
exists edgeset T
require cc(T) <= 1 and |L| == k and |T| == |V| - 1 and |R| == 1
formula: diamond(T) & (R -> !diamond(T & up)) & (!R -> diamond[{1}](T & up))
       & (L <-> !diamond(T & down))
)"},
      {"max-full-degree-spanning-tree", R"(problem "max-full-degree-spanning-tree"
param k
exists vertexset F
exists edgeset T
require cc(T) <= 1 and |F| >= k and |T| == |V| - 1
formula: diamond(T) & (F <-> box(T))
)"},
      {"graph-metric-tsp", R"(problem "graph-metric-tsp"
param k
exists edgeset Y, Y1, Y2
require cc(Y) <= 1 and |Y1| + 2 * |Y2| <= k
formula: box(Y <-> (Y1 | Y2)) & box(!Y1 | !Y2) & diamond(Y) & diamond[even](Y1)
)"},
  };
  return src;
}

}  // namespace detail

// X | diamond(X | diamond(... X)), with r diamonds.
inline std::string r_dominating_set_source(int r) {
  if (r < 1) throw SpecError("r-dominating-set needs r >= 1");
  std::string f = "X";
  for (int i = 0; i < r; ++i) f = "X | diamond(" + f + ")";
  return "problem \"r-dominating-set(" + std::to_string(r) + ")\"\nparam k\nexists vertexset X\nrequire |X| <= k\nformula: " + f +
         "\n";
}

// Every catalogue name; r-dominating-set is listed with r = 1.
inline std::vector<std::string> catalogue_names() {
  std::vector<std::string> names = {"vertex-cover", "r-dominating-set(1)"};
  for (const auto& [name, _] : detail::catalogue_sources())
    if (name != "vertex-cover") names.push_back(name);
  return names;
}

inline std::string problem_source(const std::string& name) {
  const std::string prefix = "r-dominating-set";
  if (name.rfind(prefix, 0) == 0) {
    std::string rest = name.substr(prefix.size());
    if (rest.empty()) return r_dominating_set_source(1);
    if (rest.size() < 3 || rest.front() != '(' || rest.back() != ')') throw SpecError("expected r-dominating-set(r)");
    auto r = detail::parse_int(rest.substr(1, rest.size() - 2));
    if (!r) throw SpecError("expected an integer r in '" + name + "'");
    if (*r < 1 || *r > 64) throw SpecError("r-dominating-set needs 1 <= r <= 64");
    return r_dominating_set_source(static_cast<int>(*r));
  }
  auto it = detail::catalogue_sources().find(name);
  if (it == detail::catalogue_sources().end()) throw SpecError("unknown problem '" + name + "'");
  return it->second;
}

inline ProblemSpec make_problem(const std::string& name) { return parse_problem(problem_source(name)); }

}  // namespace ecml
