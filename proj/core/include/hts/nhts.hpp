#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hts/dataset.hpp"
#include "hts/graph.hpp"
#include "hts/stats.hpp"

namespace hts {

/// Parent-relation facts discovered by the nonlinear sort.
struct Prs {
  int d = 0;
  std::vector<std::uint8_t> dependent;  // d x d, symmetric pairwise marginal verdicts
  std::vector<Edge> pp2_parents;        // (i, j): x_i identified as a parent of x_j, one direction only
  VertexSet w;                          // vertices with at least one PP2 child
  VertexSet isolated;
  VertexSet known_roots;

  explicit Prs(int size = 0);

  bool is_dependent(Vertex i, Vertex j) const;
  bool is_pp2(Vertex parent, Vertex child) const;
  VertexSet pp2_children(Vertex v) const;
};

/// P_ij = {k : x_k independent of x_i, x_k dependent on x_j}.
VertexSet build_pij(const Prs& prs, Vertex i, Vertex j);

struct RegressionRecord {
  Vertex target = 0;
  int covariates = 0;
  int stage = 0;
};

struct SortTrace {
  std::vector<RegressionRecord> regressions;
  std::vector<VertexSet> layer_history;  // layers in the order they were assigned
  int tests = 0;
  bool root_guard_fired = false;
  int stall_guard_count = 0;
  std::vector<std::string> errors;

  /// Regressions at `stage`; with covariates >= 0 only those of that covariate-set size.
  int regression_count(int stage, int covariates = -1) const;
};

/// Source of verdicts for the nonlinear sort.
class NonlinearVerdicts {
 public:
  virtual ~NonlinearVerdicts() = default;
  virtual int size() const = 0;
  virtual TestResult independent(Vertex i, Vertex j) = 0;
  /// Regresses x_target on the covariates and tests the residual against x_probe.
  virtual TestResult residual_independent(Vertex target, const VertexSet& covariates, Vertex probe,
                                          const KernelSpec& kernel) = 0;
  /// Regresses x_target on the covariates and tests the residual against each covariate.
  /// Returns the smallest p-value; `independent` is true iff every test accepts.
  virtual TestResult residual_independent_of_all(Vertex target, const VertexSet& covariates,
                                                 const KernelSpec& kernel) = 0;
  virtual TestResult conditionally_independent(Vertex i, Vertex j, const VertexSet& given) = 0;
};

class DataNonlinearVerdicts final : public NonlinearVerdicts {
 public:
  DataNonlinearVerdicts(const Dataset& ds, const TestConfig& cfg);

  int size() const override { return ds_.cols(); }
  TestResult independent(Vertex i, Vertex j) override;
  TestResult residual_independent(Vertex target, const VertexSet& covariates, Vertex probe,
                                  const KernelSpec& kernel) override;
  TestResult residual_independent_of_all(Vertex target, const VertexSet& covariates,
                                         const KernelSpec& kernel) override;
  TestResult conditionally_independent(Vertex i, Vertex j, const VertexSet& given) override;

 private:
  TestConfig next_config();
  Eigen::MatrixXd columns(const VertexSet& vs) const;

  const Dataset& ds_;
  TestConfig cfg_;
  std::uint64_t calls_ = 0;
};

/// Graph-truth verdicts for an additive noise model over `g`: the residual of
/// x_target on S is its own noise, hence independent of S, iff S holds every
/// parent of x_target and no descendant of it; otherwise it stays dependent.
class GraphNonlinearOracle final : public NonlinearVerdicts {
 public:
  explicit GraphNonlinearOracle(const Dag& g);

  int size() const override { return g_.size(); }
  TestResult independent(Vertex i, Vertex j) override;
  TestResult residual_independent(Vertex target, const VertexSet& covariates, Vertex probe,
                                  const KernelSpec& kernel) override;
  TestResult residual_independent_of_all(Vertex target, const VertexSet& covariates,
                                         const KernelSpec& kernel) override;
  TestResult conditionally_independent(Vertex i, Vertex j, const VertexSet& given) override;

 private:
  bool residual_is_noise(Vertex target, const VertexSet& covariates) const;

  Dag g_;
  std::vector<VertexSet> descendants_;
};

/// layer: every vertex that passes joins the round's layer. single: only the
/// vertex with the largest minimum p-value joins, giving a linear order.
enum class Admission { layer, single };

Prs nhts_stage1(NonlinearVerdicts& verdicts, SortTrace& trace);
Prs nhts_stage2(NonlinearVerdicts& verdicts, const KernelSpec& krr, Prs prs, SortTrace& trace);
VertexSet nhts_stage3(NonlinearVerdicts& verdicts, const Prs& prs, SortTrace& trace);
HierarchicalOrder nhts_stage4(NonlinearVerdicts& verdicts, const KernelSpec& krr, const VertexSet& sorted0,
                              SortTrace& trace, Admission admission = Admission::layer);

Prs nhts_stage1(const Dataset& ds, const TestConfig& cfg);
Prs nhts_stage2(const Dataset& ds, const TestConfig& cfg, const KernelSpec& krr, Prs prs);
VertexSet nhts_stage3(const Dataset& ds, const TestConfig& cfg, const Prs& prs);
HierarchicalOrder nhts_stage4(const Dataset& ds, const TestConfig& cfg, const KernelSpec& krr,
                              const VertexSet& sorted0);

struct NhtsResult {
  HierarchicalOrder order;
  Prs prs;
  SortTrace trace;
};

NhtsResult nhts(NonlinearVerdicts& verdicts, const KernelSpec& krr2, const KernelSpec& krr4,
                Admission admission = Admission::layer);
NhtsResult nhts(const Dataset& ds, const TestConfig& cfg, const KernelSpec& krr2 = default_pairwise_kernel(),
                const KernelSpec& krr4 = default_layer_kernel(), Admission admission = Admission::layer);

}  // namespace hts
