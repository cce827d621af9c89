#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hts/dataset.hpp"
#include "hts/graph.hpp"
#include "hts/stats.hpp"

namespace hts {

/// Pairwise active-ancestral-path relation. AncestorOf/DescendantOf cover both
/// the frontdoor-only and the frontdoor-plus-backdoor cases; the stage that set
/// the entry is kept alongside as provenance.
enum class ApRelation : int {
  unknown = 0,
  unrelated_ap1 = 1,
  unrelated_ap2 = 2,
  ancestor_of = 3,
  descendant_of = 4,
};

/// d x d table of ancestral relations. Entry (i, j) describes i relative to j.
class Ars {
 public:
  Ars() = default;
  explicit Ars(int d);

  int size() const { return d_; }
  ApRelation at(Vertex i, Vertex j) const;
  /// Stage (1, 2 or 3) that resolved the pair; 0 while unknown.
  int provenance(Vertex i, Vertex j) const;

  void set_unrelated(Vertex i, Vertex j, ApRelation kind, int stage);
  void set_ancestor(Vertex ancestor, Vertex descendant, int stage);

  VertexSet known_ancestors(Vertex v) const;
  VertexSet mutual_ancestors(Vertex i, Vertex j) const;
  /// Unordered pairs (i < j) still unknown.
  std::vector<Edge> unknown_pairs() const;

  friend bool operator==(const Ars& a, const Ars& b) = default;

 private:
  std::size_t index(Vertex i, Vertex j) const;

  int d_ = 0;
  std::vector<ApRelation> rel_;
  std::vector<std::uint8_t> stage_;
};

/// Source of independence verdicts for the linear sort. The data-backed
/// implementation runs regressions and tests; oracles answer from a known model.
class LinearVerdicts {
 public:
  virtual ~LinearVerdicts() = default;
  virtual int size() const = 0;
  virtual TestResult independent(Vertex i, Vertex j) = 0;
  /// After removing the mutual ancestors from both: {x_i vs residual of x_j on x_i,
  /// x_j vs residual of x_i on x_j}.
  virtual std::pair<TestResult, TestResult> residual_pattern(Vertex i, Vertex j, const VertexSet& mutual) = 0;
};

class DataLinearVerdicts final : public LinearVerdicts {
 public:
  DataLinearVerdicts(const Dataset& ds, const TestConfig& cfg);

  int size() const override { return ds_.cols(); }
  TestResult independent(Vertex i, Vertex j) override;
  std::pair<TestResult, TestResult> residual_pattern(Vertex i, Vertex j, const VertexSet& mutual) override;

 private:
  TestConfig next_config();

  const Dataset& ds_;
  TestConfig cfg_;
  std::uint64_t calls_ = 0;
};

/// Population verdicts of a linear SEM over `g` with non-Gaussian noise. Every
/// variable is an exact linear combination of the independent noise terms, so two
/// combinations are independent iff they share no noise term.
class LinearSemOracle final : public LinearVerdicts {
 public:
  LinearSemOracle(const Dag& g, std::uint64_t weight_seed);

  int size() const override { return g_.size(); }
  TestResult independent(Vertex i, Vertex j) override;
  std::pair<TestResult, TestResult> residual_pattern(Vertex i, Vertex j, const VertexSet& mutual) override;

 private:
  Dag g_;
  Eigen::MatrixXd mixing_;  // row v: noise coefficients of x_v
};

struct LhtsTestRecord {
  int stage = 0;
  Vertex i = 0;
  Vertex j = 0;
  std::string kind;  // "marginal", "forward", "backward"
  int conditioning = 0;
  double p_value = 1.0;
  bool independent = true;
};

struct LhtsDiagnostics {
  int tests = 0;
  int stage3_passes = 0;
  bool stall_guard_fired = false;
  bool cycle_repaired = false;
  std::vector<std::string> errors;
  std::vector<LhtsTestRecord> trace;
};

Ars lhts_stage1(LinearVerdicts& verdicts, Ars ars, LhtsDiagnostics& diag);
Ars lhts_stage2(LinearVerdicts& verdicts, Ars ars, LhtsDiagnostics& diag);
Ars lhts_stage3(LinearVerdicts& verdicts, Ars ars, LhtsDiagnostics& diag);

Ars lhts_stage1(const Dataset& ds, const TestConfig& cfg, Ars ars);
Ars lhts_stage2(const Dataset& ds, const TestConfig& cfg, Ars ars);
Ars lhts_stage3(const Dataset& ds, const TestConfig& cfg, Ars ars);

struct AncestorSortResult {
  HierarchicalOrder order;
  bool cycle_repaired = false;
};

/// Peels, layer by layer, the vertices with no known ancestor among the unsorted
/// ones. A cycle in the table is broken by peeling the vertex with the fewest
/// unsorted known ancestors on its own.
AncestorSortResult ancestor_sort_checked(const Ars& ars);
HierarchicalOrder ancestor_sort(const Ars& ars);

struct LhtsResult {
  HierarchicalOrder order;
  Ars ars;
  LhtsDiagnostics diagnostics;
};

LhtsResult lhts(LinearVerdicts& verdicts);
LhtsResult lhts(const Dataset& ds, const TestConfig& cfg);

std::string to_string(ApRelation r);

}  // namespace hts
