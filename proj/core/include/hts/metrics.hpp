#pragma once

#include "hts/graph.hpp"

namespace hts {

/// Fraction of true edges whose parent precedes the child. Edgeless graphs score 1.0.
double a_top(const LinearOrder& order, const Dag& g);

/// Hierarchical variant: an edge counts only when the parent's layer is strictly
/// earlier than the child's. Same-layer endpoints count as not recovered.
double a_top(const HierarchicalOrder& order, const Dag& g);

struct EdgeScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Directed-edge precision/recall/F1 of `pred` against the edges of `g`.
/// Empty prediction on an empty graph scores 1.0 across the board.
EdgeScores edge_f1(const ParentSets& pred, const Dag& g);

}  // namespace hts
