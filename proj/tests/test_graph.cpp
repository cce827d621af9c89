#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "brute_force.hpp"
#include "fixtures.hpp"
#include "hts/error.hpp"
#include "hts/graph.hpp"

namespace hts {
namespace {

using testing::chain;
using testing::walkthrough_dag;

TEST(Dag, RejectsCyclesAndSelfEdges) {
  Dag g = chain(3);
  EXPECT_THROW(g.add_edge(2, 0), StructuralError);
  EXPECT_THROW(g.add_edge(1, 1), StructuralError);
  EXPECT_THROW(g.add_edge(0, 5), ParameterError);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.reaches(0, 2));
  EXPECT_FALSE(g.reaches(2, 0));
}

TEST(Dag, FromEdgesRoundTrip) {
  const Dag g = walkthrough_dag();
  const auto e = g.edges();
  EXPECT_EQ(Dag::from_edges(5, e), g);
}

TEST(ErdosRenyi, SingleVertexHasNoEdges) { EXPECT_EQ(erdos_renyi_dag(1, 3.0, 1).edge_count(), 0u); }

TEST(ErdosRenyi, FullProbabilityGivesCompleteDag) {
  const Dag g = erdos_renyi_dag(5, 10.0, 4);
  EXPECT_EQ(g.edge_count(), 10u);
}

TEST(ErdosRenyi, MeanEdgeCountMatches) {
  double total = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) total += static_cast<double>(erdos_renyi_dag(10, 10.0, s).edge_count());
  EXPECT_NEAR(total / 1000.0, 10.0, 0.5);
}

TEST(ErdosRenyi, SameSeedSameGraph) { EXPECT_EQ(erdos_renyi_dag(12, 18.0, 9), erdos_renyi_dag(12, 18.0, 9)); }

TEST(ErdosRenyi, RejectsBadArguments) {
  EXPECT_THROW(erdos_renyi_dag(0, 1.0, 0), ParameterError);
  EXPECT_THROW(erdos_renyi_dag(4, 7.0, 0), ParameterError);
}

TEST(Relatives, FigureOneTriangle) {
  const std::vector<Edge> e{{0, 1}, {0, 2}, {1, 2}};
  const Dag g = Dag::from_edges(3, e);
  EXPECT_EQ(relatives(g, 2, Kinship::parents), (VertexSet{0, 1}));
  EXPECT_TRUE(relatives(g, 0, Kinship::ancestors).empty());
  EXPECT_EQ(relatives(g, 0, Kinship::descendants), (VertexSet{1, 2}));
  EXPECT_EQ(relatives(g, 1, Kinship::children), (VertexSet{2}));
}

TEST(HierarchicalOrderTest, Examples) {
  EXPECT_EQ(true_hierarchical_order(chain(3)).layers(), (std::vector<VertexSet>{{0}, {1}, {2}}));
  EXPECT_EQ(true_hierarchical_order(walkthrough_dag()).layers(),
            (std::vector<VertexSet>{{0}, {1, 2}, {3}, {4}}));
  EXPECT_EQ(true_hierarchical_order(Dag(4)).layers(), (std::vector<VertexSet>{{0, 1, 2, 3}}));
}

TEST(HierarchicalOrderTest, RejectsNonPartitions) {
  EXPECT_THROW(HierarchicalOrder({{0, 1}, {1}}), StructuralError);
  EXPECT_THROW(HierarchicalOrder({{0}, {}}), StructuralError);
  EXPECT_THROW(HierarchicalOrder({{0}, {2}}), StructuralError);
}

TEST(HierarchicalOrderTest, MatchesLongestPathOnAllSmallDags) {
  for (int d = 1; d <= 5; ++d) {
    for_each_forward_dag(d, [&](const Dag& g) {
      const auto h = true_hierarchical_order(g);
      const auto depth = testing::longest_path_depths(g);
      for (Vertex v = 0; v < d; ++v) ASSERT_EQ(h.layer_of(v), depth[static_cast<std::size_t>(v)]);
    });
  }
}

TEST(ForwardDags, CountsAreSubsetsOfForwardPairs) {
  for (int d = 1; d <= 5; ++d) {
    long count = 0;
    std::set<std::vector<Edge>> seen;
    for_each_forward_dag(d, [&](const Dag& g) {
      ++count;
      seen.insert(g.edges());
    });
    EXPECT_EQ(count, 1L << (d * (d - 1) / 2));
    EXPECT_EQ(static_cast<long>(seen.size()), count);
  }
}

TEST(Relabel, PreservesStructure) {
  const Dag g = walkthrough_dag();
  const std::vector<Vertex> label{4, 3, 2, 1, 0};
  const Dag r = relabel(g, label);
  EXPECT_TRUE(r.has_edge(4, 3));
  EXPECT_TRUE(r.has_edge(1, 0));
  EXPECT_EQ(r.edge_count(), g.edge_count());
}

TEST(DSeparation, WalkthroughExamples) {
  const Dag g = walkthrough_dag();
  EXPECT_TRUE(d_separated(g, 1, 2, {0}));
  EXPECT_TRUE(d_separated(g, 0, 3, {1, 2}));
  EXPECT_FALSE(d_separated(g, 0, 1, {}));
  EXPECT_FALSE(d_separated(g, 1, 2, {0, 3}));
  EXPECT_FALSE(d_separated(g, 1, 2, {0, 4}));
}

TEST(DSeparation, AgreesWithPathEnumerationUpToFiveVertices) {
  for (int d = 2; d <= 5; ++d) {
    for_each_forward_dag(d, [&](const Dag& g) { ASSERT_EQ(testing::dsep_mismatches(g), 0) << d; });
  }
}

TEST(Linearize, RespectsLayers) {
  const HierarchicalOrder h({{0}, {1, 2}, {3}});
  std::set<std::vector<Vertex>> seen;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto o = linearize(h, s);
    EXPECT_EQ(o.at(0), 0);
    EXPECT_EQ(o.at(3), 3);
    seen.insert(o.perm());
  }
  EXPECT_EQ(seen.size(), 2u);
  EXPECT_EQ(linearize(h, 11), linearize(h, 11));
  EXPECT_EQ(linearize(HierarchicalOrder({{0}, {1}}), 3).perm(), (std::vector<Vertex>{0, 1}));
}

TEST(RandomTopologicalOrder, IsValid) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Dag g = erdos_renyi_dag(9, 14.0, s);
    const auto o = random_topological_order(g, s + 100);
    for (const auto& [a, b] : g.edges()) EXPECT_LT(o.position(a), o.position(b));
  }
}

TEST(LinearOrderTest, RejectsNonPermutations) {
  EXPECT_THROW(LinearOrder({0, 0, 1}), StructuralError);
  EXPECT_EQ(LinearOrder::identity(3).position(2), 2);
}

TEST(SetUnion, SortedAndUnique) { EXPECT_EQ(set_union({0, 3}, {1, 3, 5}), (VertexSet{0, 1, 3, 5})); }

}  // namespace
}  // namespace hts
