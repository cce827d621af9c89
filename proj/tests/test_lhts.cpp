#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hts/error.hpp"
#include "hts/lhts.hpp"
#include "hts/seed.hpp"
#include "hts/synth.hpp"

namespace hts {
namespace {

Dataset linear_data(const Dag& g, int n, std::uint64_t seed) {
  ScmConfig c;
  c.mechanism = Mechanism::linear;
  c.noise = Noise::uniform;
  c.seed = seed;
  return simulate(g, n, c).data;
}

TestConfig tests(std::uint64_t seed) {
  TestConfig c;
  c.seed = seed;
  return c;
}

Ars true_ars(const Dag& g) {
  Ars ars(g.size());
  for (Vertex i = 0; i < g.size(); ++i) {
    for (Vertex j = i + 1; j < g.size(); ++j) {
      if (g.reaches(i, j)) ars.set_ancestor(i, j, 3);
      else if (g.reaches(j, i)) ars.set_ancestor(j, i, 3);
      else if (d_separated(g, i, j, {})) ars.set_unrelated(i, j, ApRelation::unrelated_ap1, 1);
      else ars.set_unrelated(i, j, ApRelation::unrelated_ap2, 3);
    }
  }
  return ars;
}

TEST(ArsTable, SymmetricBookkeeping) {
  Ars ars(3);
  ars.set_ancestor(0, 2, 2);
  EXPECT_EQ(ars.at(0, 2), ApRelation::ancestor_of);
  EXPECT_EQ(ars.at(2, 0), ApRelation::descendant_of);
  EXPECT_EQ(ars.provenance(2, 0), 2);
  ars.set_ancestor(0, 1, 2);
  EXPECT_EQ(ars.mutual_ancestors(1, 2), (VertexSet{0}));
  EXPECT_EQ(ars.known_ancestors(2), (VertexSet{0}));
  EXPECT_EQ(ars.unknown_pairs(), (std::vector<Edge>{{1, 2}}));
  ars.set_unrelated(2, 1, ApRelation::unrelated_ap2, 3);
  EXPECT_EQ(ars.at(1, 2), ApRelation::unrelated_ap2);
  EXPECT_TRUE(ars.unknown_pairs().empty());
  EXPECT_THROW(ars.set_unrelated(0, 1, ApRelation::ancestor_of, 1), ParameterError);
}

TEST(Stage1, IsolatedPairIsUnrelated) {
  const Dataset ds = linear_data(Dag(2), 1000, 1);
  const Ars ars = lhts_stage1(ds, tests(2), Ars(2));
  EXPECT_EQ(ars.at(0, 1), ApRelation::unrelated_ap1);
}

TEST(Stage1, DirectEdgeStaysUnknown) {
  const Dataset ds = linear_data(testing::chain(2), 2000, 3);
  EXPECT_EQ(lhts_stage1(ds, tests(4), Ars(2)).at(0, 1), ApRelation::unknown);
}

TEST(Stage1, WalkthroughHasNoUnrelatedPairs) {
  const Dataset ds = linear_data(testing::walkthrough_dag(), 2000, 5);
  const Ars ars = lhts_stage1(ds, tests(6), Ars(5));
  EXPECT_EQ(ars.unknown_pairs().size(), 10u);
}

TEST(Stage2, DirectEdgeIsOriented) {
  const Dataset ds = linear_data(testing::chain(2), 2000, 7);
  Ars ars = lhts_stage1(ds, tests(8), Ars(2));
  ars = lhts_stage2(ds, tests(9), ars);
  EXPECT_EQ(ars.at(0, 1), ApRelation::ancestor_of);
  EXPECT_EQ(ars.provenance(0, 1), 2);
}

TEST(Stage2, ConfoundedPairStaysUnknown) {
  const std::vector<Edge> e{{0, 1}, {0, 2}};
  LinearSemOracle oracle(Dag::from_edges(3, e), 10);
  LhtsDiagnostics diag;
  Ars ars = lhts_stage1(oracle, Ars(3), diag);
  ars = lhts_stage2(oracle, ars, diag);
  EXPECT_EQ(ars.at(1, 2), ApRelation::unknown);
  EXPECT_EQ(ars.at(0, 1), ApRelation::ancestor_of);
  EXPECT_EQ(ars.at(0, 2), ApRelation::ancestor_of);

  ars = lhts_stage3(oracle, ars, diag);
  EXPECT_EQ(ars.at(1, 2), ApRelation::unrelated_ap2);
  EXPECT_EQ(ars.provenance(1, 2), 3);
}

TEST(Stage2, OracleRootsHaveNoParents) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Dag g = erdos_renyi_dag(7, 9.0, s);
    LinearSemOracle oracle(g, s);
    LhtsDiagnostics diag;
    Ars ars = lhts_stage1(oracle, Ars(7), diag);
    ars = lhts_stage2(oracle, ars, diag);
    for (Vertex v = 0; v < 7; ++v) {
      bool settled = true;
      for (Vertex u = 0; u < 7; ++u) {
        if (u == v) continue;
        const auto r = ars.at(v, u);
        settled = settled && (r == ApRelation::unrelated_ap1 || r == ApRelation::ancestor_of);
      }
      if (settled) EXPECT_TRUE(g.parents(v).empty()) << s << " " << v;
    }
  }
}

TEST(Stage3, WalkthroughOrientsMediatedPairs) {
  LinearSemOracle oracle(testing::walkthrough_dag(), 1);
  LhtsDiagnostics diag;
  Ars ars = lhts_stage1(oracle, Ars(5), diag);
  ars = lhts_stage2(oracle, ars, diag);
  ars = lhts_stage3(oracle, ars, diag);
  EXPECT_EQ(ars.at(1, 3), ApRelation::ancestor_of);
  EXPECT_EQ(ars.at(2, 3), ApRelation::ancestor_of);
  EXPECT_EQ(ars.at(1, 2), ApRelation::unrelated_ap2);
  EXPECT_FALSE(diag.stall_guard_fired);
}

TEST(AncestorSort, TrueTableGivesTrueLayering) {
  for (int d = 1; d <= 5; ++d) {
    for_each_forward_dag(d, [&](const Dag& g) {
      const auto r = ancestor_sort_checked(true_ars(g));
      ASSERT_EQ(r.order, true_hierarchical_order(g));
      ASSERT_FALSE(r.cycle_repaired);
    });
  }
}

TEST(AncestorSort, EmptyTableIsOneLayer) {
  EXPECT_EQ(ancestor_sort(Ars(4)).layers(), (std::vector<VertexSet>{{0, 1, 2, 3}}));
}

TEST(AncestorSort, WalkthroughTable) {
  Ars ars(5);
  ars.set_ancestor(0, 1, 2);
  ars.set_ancestor(0, 2, 2);
  ars.set_ancestor(0, 3, 2);
  ars.set_ancestor(0, 4, 2);
  ars.set_unrelated(1, 2, ApRelation::unrelated_ap2, 3);
  ars.set_ancestor(1, 3, 3);
  ars.set_ancestor(2, 3, 3);
  ars.set_ancestor(1, 4, 3);
  ars.set_ancestor(2, 4, 3);
  ars.set_ancestor(3, 4, 3);
  EXPECT_EQ(ancestor_sort(ars).layers(), (std::vector<VertexSet>{{0}, {1, 2}, {3}, {4}}));
}

TEST(AncestorSort, BreaksCycles) {
  Ars ars(3);
  ars.set_ancestor(0, 1, 2);
  ars.set_ancestor(1, 2, 2);
  ars.set_ancestor(2, 0, 2);
  const auto r = ancestor_sort_checked(ars);
  EXPECT_TRUE(r.cycle_repaired);
  EXPECT_EQ(r.order.size(), 3);
}

TEST(Lhts, SingleVertexIsOneLayer) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(50, 1);
  const auto r = lhts(Dataset(m), tests(0));
  EXPECT_EQ(r.order.layer_count(), 1);
  EXPECT_EQ(r.diagnostics.tests, 0);
}

TEST(Lhts, OracleMatchesTruthOnRandomGraphs) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Dag g = erdos_renyi_dag(8, 4.0 + static_cast<double>(s % 20), s);
    LinearSemOracle oracle(g, s + 1);
    EXPECT_EQ(lhts(oracle).order, true_hierarchical_order(g)) << s;
  }
}

TEST(Lhts, RecoversChainFromData) {
  const Dataset ds = linear_data(testing::chain(4), 2000, 21);
  const auto r = lhts(ds, tests(22));
  EXPECT_EQ(r.order, true_hierarchical_order(testing::chain(4)));
  EXPECT_TRUE(r.diagnostics.errors.empty());
}

TEST(Lhts, RejectsMismatchedTable) {
  const Dataset ds = linear_data(testing::chain(3), 100, 1);
  EXPECT_THROW(lhts_stage1(ds, tests(0), Ars(4)), ParameterError);
}

}  // namespace
}  // namespace hts
