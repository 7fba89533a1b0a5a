// Counts vertex covers of size at most k on a cycle, with the DP and with the oracle.
#include <iostream>

#include "ecml/ecml.hpp"

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 8;
  int k = argc > 2 ? std::atoi(argv[2]) : 5;
  std::vector<ecml::Edge> edges;
  for (int v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n});
  ecml::Graph cycle(n, edges);

  auto spec = ecml::make_problem("vertex-cover");
  ecml::Instance inst{cycle, {}, {}, {k}};
  auto td = ecml::greedy_decomposition(cycle);
  auto nice = ecml::make_nice(cycle, td);

  auto dp = ecml::count_solutions(inst, nice, spec);
  auto brute = ecml::brute_force_count(inst, spec);
  std::cout << "C" << n << ", k=" << k << ", width " << td.width() << ": " << dp << " vertex covers (oracle " << brute << ")\n";
  return dp == brute ? 0 : 1;
}
