#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hts/dataset.hpp"
#include "hts/graph.hpp"
#include "hts/stats.hpp"

namespace hts {

struct EdConfig {
  TestConfig ci;
  /// When set, conditional-independence verdicts come from d-separation in this graph.
  std::optional<Dag> oracle;
  /// Condition only on the parents of x_i that are marginally dependent on x_j
  /// instead of on all discovered parents of x_i.
  bool strict_confounders = false;
  /// After the scan, re-test every discovered edge x_i -> x_j given Pa(x_i) and
  /// the other discovered parents of x_j, dropping edges that become independent.
  bool confirm_edges = false;
};

struct EdTestRecord {
  Vertex i = 0;  // candidate parent
  Vertex j = 0;  // target
  int z_size = 0;
  double p_value = 1.0;
  bool dependent = false;
};

struct EdResult {
  ParentSets parents;
  std::vector<EdTestRecord> trace;
  int tests = 0;
  int max_z = 0;
  std::vector<std::string> errors;

  /// Number of tests per conditioning-set size.
  std::map<int, int> z_histogram() const;
};

/// Scans candidate parents in reverse order position for every target and keeps
/// x_i -> x_j iff x_i and x_j are dependent given Pa(x_i) and Pa(x_j) found so far.
EdResult ed_linear_run(const Dataset& ds, const LinearOrder& order, const EdConfig& cfg);
ParentSets ed_linear(const Dataset& ds, const LinearOrder& order, const EdConfig& cfg);

/// Layered variant: candidates come from strictly earlier layers, nearest layer
/// first; the target's side of the conditioning set keeps only parents found in
/// layers strictly between the candidate and the target.
EdResult ed_hierarchical_run(const Dataset& ds, const HierarchicalOrder& order, const EdConfig& cfg);
ParentSets ed_hierarchical(const Dataset& ds, const HierarchicalOrder& order, const EdConfig& cfg);

/// True iff x_i and x_j are d-separated by Z in g.
bool ed_oracle_verdict(const Dag& g, Vertex i, Vertex j, const VertexSet& z);

}  // namespace hts
