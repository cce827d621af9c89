#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hts {

using Vertex = int;
/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;
using Edge = std::pair<Vertex, Vertex>;

class LinearOrder;

/// Directed acyclic graph over vertices 0..d-1 stored as a dense adjacency relation.
/// Every mutation keeps the graph acyclic; a rejected edge throws StructuralError.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int d);

  static Dag from_edges(int d, std::span<const Edge> edges);

  int size() const { return d_; }
  bool has_edge(Vertex from, Vertex to) const;

  /// Adds from -> to. Throws StructuralError on a self-edge or when the edge closes a cycle.
  void add_edge(Vertex from, Vertex to);
  void remove_edge(Vertex from, Vertex to);

  VertexSet parents(Vertex v) const;
  VertexSet children(Vertex v) const;
  std::size_t edge_count() const;
  std::vector<Edge> edges() const;

  /// True when `to` is reachable from `from` along directed edges (from != to).
  bool reaches(Vertex from, Vertex to) const;

  friend bool operator==(const Dag& a, const Dag& b) = default;

 private:
  void check_vertex(Vertex v) const;

  int d_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// Permutation of the vertex ids; perm()[k] is the vertex placed at position k.
class LinearOrder {
 public:
  LinearOrder() = default;
  explicit LinearOrder(std::vector<Vertex> perm);

  static LinearOrder identity(int d);

  int size() const { return static_cast<int>(perm_.size()); }
  const std::vector<Vertex>& perm() const { return perm_; }
  Vertex at(int position) const { return perm_[static_cast<std::size_t>(position)]; }
  int position(Vertex v) const { return pos_[static_cast<std::size_t>(v)]; }

  friend bool operator==(const LinearOrder& a, const LinearOrder& b) { return a.perm_ == b.perm_; }

 private:
  std::vector<Vertex> perm_;
  std::vector<int> pos_;
};

/// Ordered partition of the vertices into nonempty layers.
class HierarchicalOrder {
 public:
  HierarchicalOrder() = default;
  /// Layers are sorted internally; throws StructuralError unless they partition 0..d-1.
  explicit HierarchicalOrder(std::vector<VertexSet> layers);

  int size() const { return static_cast<int>(layer_of_.size()); }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  const std::vector<VertexSet>& layers() const { return layers_; }
  const VertexSet& layer(int k) const { return layers_[static_cast<std::size_t>(k)]; }
  int layer_of(Vertex v) const { return layer_of_[static_cast<std::size_t>(v)]; }

  friend bool operator==(const HierarchicalOrder& a, const HierarchicalOrder& b) {
    return a.layers_ == b.layers_;
  }

 private:
  std::vector<VertexSet> layers_;
  std::vector<int> layer_of_;
};

/// Predicted parent set per vertex.
class ParentSets {
 public:
  ParentSets() = default;
  explicit ParentSets(int d) : parents_(static_cast<std::size_t>(d)) {}
  static ParentSets from_dag(const Dag& g);

  int size() const { return static_cast<int>(parents_.size()); }
  const VertexSet& of(Vertex child) const { return parents_[static_cast<std::size_t>(child)]; }
  bool contains(Vertex parent, Vertex child) const;
  void add(Vertex parent, Vertex child);
  std::size_t edge_count() const;
  std::vector<Edge> edges() const;

  friend bool operator==(const ParentSets& a, const ParentSets& b) = default;

 private:
  std::vector<VertexSet> parents_;
};

enum class Kinship { parents, children, ancestors, descendants };

VertexSet relatives(const Dag& g, Vertex v, Kinship kind);

/// Longest-path layering: roots in layer 0, every other vertex one past its deepest parent.
HierarchicalOrder true_hierarchical_order(const Dag& g);

/// Kahn's algorithm with seeded random tie-breaking among ready vertices.
LinearOrder random_topological_order(const Dag& g, std::uint64_t seed);

/// True iff every path between i and j is blocked by Z (Bayes-ball reachability).
bool d_separated(const Dag& g, Vertex i, Vertex j, const VertexSet& z);

/// Concatenates the layers, shuffling vertices inside each layer with `seed`.
LinearOrder linearize(const HierarchicalOrder& h, std::uint64_t seed);

/// Random DAG: a random latent permutation, each forward pair an edge with
/// p = expected_edges / (d(d-1)/2). A single vertex ignores expected_edges.
Dag erdos_renyi_dag(int d, double expected_edges, std::uint64_t seed);

/// Relabels vertices: vertex v of `g` becomes new_label[v].
Dag relabel(const Dag& g, std::span<const Vertex> new_label);

/// Visits every DAG whose edges all point from lower to higher id. Every DAG on d
/// vertices is isomorphic to at least one of these 2^(d(d-1)/2) graphs.
void for_each_forward_dag(int d, const std::function<void(const Dag&)>& visit);

/// Sorted union of two vertex sets.
VertexSet set_union(const VertexSet& a, const VertexSet& b);

}  // namespace hts
