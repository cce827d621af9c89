#include "hts/metrics.hpp"

#include "hts/error.hpp"

namespace hts {

namespace {

template <typename Precedes>
double fraction_recovered(const Dag& g, Precedes precedes) {
  const auto edges = g.edges();
  if (edges.empty()) return 1.0;
  std::size_t hits = 0;
  for (const auto& [from, to] : edges)
    if (precedes(from, to)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(edges.size());
}

}  // namespace

double a_top(const LinearOrder& order, const Dag& g) {
  if (order.size() != g.size()) throw ParameterError("a_top: order and graph cover different vertex sets");
  return fraction_recovered(g, [&](Vertex a, Vertex b) { return order.position(a) < order.position(b); });
}

double a_top(const HierarchicalOrder& order, const Dag& g) {
  if (order.size() != g.size()) throw ParameterError("a_top: order and graph cover different vertex sets");
  return fraction_recovered(g, [&](Vertex a, Vertex b) { return order.layer_of(a) < order.layer_of(b); });
}

EdgeScores edge_f1(const ParentSets& pred, const Dag& g) {
  if (pred.size() != g.size()) throw ParameterError("edge_f1: vertex count mismatch");
  const std::size_t predicted = pred.edge_count();
  const std::size_t truth = g.edge_count();
  std::size_t hits = 0;
  for (const auto& [from, to] : pred.edges())
    if (g.has_edge(from, to)) ++hits;

  EdgeScores s;
  s.precision = predicted == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(predicted);
  s.recall = truth == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(truth);
  const double denom = s.precision + s.recall;
  s.f1 = denom == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / denom;
  return s;
}

}  // namespace hts
