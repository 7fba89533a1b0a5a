// Builds the C_l-deletion instance of a small 3CNF and checks the reduction by brute force.
#include <iostream>

#include "ecml/ecml.hpp"

int main() {
  auto cnf = ecml::parse_dimacs("p cnf 2 2\n1 2 2 0\n-1 -2 -2 0\n");
  for (int l : {5, 6}) {
    auto h = ecml::generate_hard_instance(cnf, l);
    auto report = ecml::check_equivalence(h, cnf);
    std::cout << "l=" << l << ": " << h.graph.num_vertices() << " vertices, " << h.graph.num_edges() << " edges, k=" << h.k
              << ", pathwidth <= " << h.path_decomposition.width() << ", satisfiable " << report.satisfiable
              << ", C_l deletion " << report.cl_deletion << "\n";
  }
}
