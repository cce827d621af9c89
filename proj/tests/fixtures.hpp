#pragma once

#include <vector>

#include "hts/graph.hpp"

namespace hts::testing {

// A -> B, A -> C, B -> D, C -> D, D -> E with A..E = 0..4.
inline Dag walkthrough_dag() {
  const std::vector<Edge> e{{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}};
  return Dag::from_edges(5, e);
}

inline Dag chain(int d) {
  Dag g(d);
  for (Vertex v = 0; v + 1 < d; ++v) g.add_edge(v, v + 1);
  return g;
}

inline Dag complete_dag(int d) {
  Dag g(d);
  for (Vertex a = 0; a < d; ++a)
    for (Vertex b = a + 1; b < d; ++b) g.add_edge(a, b);
  return g;
}

}  // namespace hts::testing
