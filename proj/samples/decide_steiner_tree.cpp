// Steiner tree on a 3x3 grid: terminals at two opposite corners.
#include <iostream>

#include "ecml/ecml.hpp"

int main() {
  std::vector<ecml::Edge> edges;
  auto id = [](int r, int c) { return 3 * r + c; };
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      if (c + 1 < 3) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < 3) edges.push_back({id(r, c), id(r + 1, c)});
    }
  ecml::Graph grid(9, edges);
  auto spec = ecml::make_problem("steiner-tree");
  auto nice = ecml::make_nice(grid, ecml::greedy_decomposition(grid));

  for (int k = 1; k <= 4; ++k) {
    ecml::Instance inst{grid, {ecml::VertexSet::of(9, {0, 8})}, {}, {k}};
    auto res = ecml::decide(inst, nice, spec, 7);
    std::cout << "k=" << k << ": " << (res.answer ? "yes" : "no") << " after " << res.runs << " of " << res.repetitions
              << " runs";
    if (res.witness) std::cout << ", odd weight class W=" << res.witness->W;
    std::cout << "\n";
  }
}
