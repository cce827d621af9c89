#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hts {

/// Outcome of running one algorithm with graph-truth verdicts over a graph suite.
struct SuiteCheck {
  std::string name;
  long graphs = 0;
  long failures = 0;
  std::string first_failure;
  double seconds = 0.0;

  bool passed() const { return graphs > 0 && failures == 0; }
};

/// The suite: every DAG on d <= dmax vertices (each forward DAG under a random
/// relabeling) followed by `random_graphs` Erdos-Renyi DAGs on 8 vertices.
SuiteCheck check_ed_oracle(int dmax, int random_graphs, std::uint64_t seed, bool confirm = false);
SuiteCheck check_ed_hierarchical_oracle(int dmax, int random_graphs, std::uint64_t seed, bool confirm = false);
SuiteCheck check_lhts_oracle(int dmax, int random_graphs, std::uint64_t seed);
/// Checks the layering and the stage-3 root set.
SuiteCheck check_nhts_oracle(int dmax, int random_graphs, std::uint64_t seed);
/// On complete DAGs of each size, stage 4 runs d - k regressions in round k.
SuiteCheck check_stage4_counters(const std::vector<int>& sizes);

std::vector<SuiteCheck> run_oracle_suites(int dmax, int random_graphs, std::uint64_t seed);

}  // namespace hts
