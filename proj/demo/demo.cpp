// Walks through the main library calls on a small network.

#include <iostream>

#include "resgeom/resgeom.hpp"

int main() {
  using namespace resgeom;

  const WeightedGraph g = parse_graph(
      "s x 1\n"
      "s y 2\n"
      "x t 2\n"
      "y t 1\n"
      "x y 0.5\n");
  const LaplacianMatrix q = build_laplacian(g);

  std::cout << "Laplacian\n" << q.matrix() << "\n\n";
  std::cout << "effective resistance s-t: " << effective_resistance(q, 0, 3) << "\n";

  const ResistanceMatrix omega = resistance_matrix(q);
  std::cout << "resistance matrix\n" << omega.matrix() << "\n\n";

  const FiedlerBlocks fb = fiedler_blocks(q);
  std::cout << "circumradius: " << fb.radius << "\n";
  std::cout << "identity residual: " << verify_fiedler_identity(q).max() << "\n";

  const SimplexEmbedding s = embed_from_laplacian(q);
  std::cout << "simplex vertices (columns)\n" << s.vertices() << "\n";
  std::cout << "volume: " << cayley_menger_volume(omega.matrix()) << "\n";
  std::cout << "hyperacute: " << std::boolalpha << is_hyperacute(GramPair::from_pseudoinverse(q.matrix())) << "\n\n";

  // Eliminate the interior nodes x and y: a single equivalent resistor.
  const LaplacianMatrix reduced = schur_complement(q, {0, 3});
  std::cout << "Kron-reduced onto {s, t}\n" << reduced.matrix() << "\n";
  std::cout << "equivalent resistance: " << 1.0 / -reduced(0, 1) << "\n";
  std::cout << "spanning trees: " << spanning_tree_count(build_laplacian(parse_graph("a b 1\nb c 1\nc a 1\n"))) << "\n";
}
