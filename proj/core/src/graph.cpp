#include "hts/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <string>

#include "hts/error.hpp"

namespace hts {

namespace {

std::size_t idx(int d, Vertex from, Vertex to) {
  return static_cast<std::size_t>(from) * static_cast<std::size_t>(d) + static_cast<std::size_t>(to);
}

}  // namespace

Dag::Dag(int d) : d_(d) {
  if (d < 0) throw ParameterError("Dag: negative vertex count");
  adj_.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0);
}

Dag Dag::from_edges(int d, std::span<const Edge> edges) {
  Dag g(d);
  for (const auto& [from, to] : edges) g.add_edge(from, to);
  return g;
}

void Dag::check_vertex(Vertex v) const {
  if (v < 0 || v >= d_) {
    throw ParameterError("vertex " + std::to_string(v) + " out of range for d=" + std::to_string(d_));
  }
}

bool Dag::has_edge(Vertex from, Vertex to) const {
  check_vertex(from);
  check_vertex(to);
  return adj_[idx(d_, from, to)] != 0;
}

bool Dag::reaches(Vertex from, Vertex to) const {
  check_vertex(from);
  check_vertex(to);
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(d_), 0);
  std::vector<Vertex> stack{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex c = 0; c < d_; ++c) {
      if (adj_[idx(d_, v, c)] == 0 || seen[static_cast<std::size_t>(c)]) continue;
      if (c == to) return true;
      seen[static_cast<std::size_t>(c)] = 1;
      stack.push_back(c);
    }
  }
  return false;
}

void Dag::add_edge(Vertex from, Vertex to) {
  check_vertex(from);
  check_vertex(to);
  if (from == to) throw StructuralError("self-edge on vertex " + std::to_string(from));
  if (adj_[idx(d_, from, to)]) return;
  if (reaches(to, from)) {
    throw StructuralError("edge " + std::to_string(from) + "->" + std::to_string(to) + " closes a cycle");
  }
  adj_[idx(d_, from, to)] = 1;
}

void Dag::remove_edge(Vertex from, Vertex to) {
  check_vertex(from);
  check_vertex(to);
  adj_[idx(d_, from, to)] = 0;
}

VertexSet Dag::parents(Vertex v) const {
  check_vertex(v);
  VertexSet out;
  for (Vertex p = 0; p < d_; ++p)
    if (adj_[idx(d_, p, v)]) out.push_back(p);
  return out;
}

VertexSet Dag::children(Vertex v) const {
  check_vertex(v);
  VertexSet out;
  for (Vertex c = 0; c < d_; ++c)
    if (adj_[idx(d_, v, c)]) out.push_back(c);
  return out;
}

std::size_t Dag::edge_count() const {
  return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), std::uint8_t{1}));
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  for (Vertex i = 0; i < d_; ++i)
    for (Vertex j = 0; j < d_; ++j)
      if (adj_[idx(d_, i, j)]) out.emplace_back(i, j);
  return out;
}

LinearOrder::LinearOrder(std::vector<Vertex> perm) : perm_(std::move(perm)), pos_(perm_.size(), -1) {
  const int d = static_cast<int>(perm_.size());
  for (int k = 0; k < d; ++k) {
    const Vertex v = perm_[static_cast<std::size_t>(k)];
    if (v < 0 || v >= d || pos_[static_cast<std::size_t>(v)] != -1) {
      throw StructuralError("linear order is not a permutation of 0..d-1");
    }
    pos_[static_cast<std::size_t>(v)] = k;
  }
}

LinearOrder LinearOrder::identity(int d) {
  std::vector<Vertex> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  return LinearOrder(std::move(perm));
}

HierarchicalOrder::HierarchicalOrder(std::vector<VertexSet> layers) : layers_(std::move(layers)) {
  std::size_t d = 0;
  for (auto& layer : layers_) {
    if (layer.empty()) throw StructuralError("hierarchical order has an empty layer");
    std::sort(layer.begin(), layer.end());
    d += layer.size();
  }
  layer_of_.assign(d, -1);
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    for (Vertex v : layers_[k]) {
      if (v < 0 || static_cast<std::size_t>(v) >= d || layer_of_[static_cast<std::size_t>(v)] != -1) {
        throw StructuralError("hierarchical layers do not partition 0..d-1");
      }
      layer_of_[static_cast<std::size_t>(v)] = static_cast<int>(k);
    }
  }
}

ParentSets ParentSets::from_dag(const Dag& g) {
  ParentSets out(g.size());
  for (Vertex v = 0; v < g.size(); ++v) out.parents_[static_cast<std::size_t>(v)] = g.parents(v);
  return out;
}

bool ParentSets::contains(Vertex parent, Vertex child) const {
  const auto& ps = of(child);
  return std::binary_search(ps.begin(), ps.end(), parent);
}

void ParentSets::add(Vertex parent, Vertex child) {
  if (parent == child) throw StructuralError("vertex cannot be its own parent");
  if (parent < 0 || parent >= size() || child < 0 || child >= size()) {
    throw ParameterError("parent set vertex out of range");
  }
  auto& ps = parents_[static_cast<std::size_t>(child)];
  auto it = std::lower_bound(ps.begin(), ps.end(), parent);
  if (it == ps.end() || *it != parent) ps.insert(it, parent);
}

std::size_t ParentSets::edge_count() const {
  std::size_t n = 0;
  for (const auto& ps : parents_) n += ps.size();
  return n;
}

std::vector<Edge> ParentSets::edges() const {
  std::vector<Edge> out;
  for (Vertex c = 0; c < size(); ++c)
    for (Vertex p : of(c)) out.emplace_back(p, c);
  std::sort(out.begin(), out.end());
  return out;
}

VertexSet relatives(const Dag& g, Vertex v, Kinship kind) {
  switch (kind) {
    case Kinship::parents:
      return g.parents(v);
    case Kinship::children:
      return g.children(v);
    case Kinship::ancestors:
    case Kinship::descendants: {
      const bool up = kind == Kinship::ancestors;
      std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.size()), 0);
      std::vector<Vertex> stack{v};
      while (!stack.empty()) {
        const Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : up ? g.parents(u) : g.children(u)) {
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            stack.push_back(w);
          }
        }
      }
      VertexSet out;
      for (Vertex u = 0; u < g.size(); ++u)
        if (seen[static_cast<std::size_t>(u)]) out.push_back(u);
      return out;
    }
  }
  return {};
}

HierarchicalOrder true_hierarchical_order(const Dag& g) {
  const int d = g.size();
  std::vector<int> indegree(static_cast<std::size_t>(d), 0);
  for (const auto& [from, to] : g.edges()) ++indegree[static_cast<std::size_t>(to)];
  std::vector<int> layer(static_cast<std::size_t>(d), 0);
  std::deque<Vertex> ready;
  for (Vertex v = 0; v < d; ++v)
    if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  int visited = 0;
  int depth = 0;
  while (!ready.empty()) {
    const Vertex v = ready.front();
    ready.pop_front();
    ++visited;
    depth = std::max(depth, layer[static_cast<std::size_t>(v)]);
    for (Vertex c : g.children(v)) {
      auto& lc = layer[static_cast<std::size_t>(c)];
      lc = std::max(lc, layer[static_cast<std::size_t>(v)] + 1);
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    }
  }
  if (visited != d) throw StructuralError("graph contains a directed cycle");
  if (d == 0) return HierarchicalOrder{};
  std::vector<VertexSet> layers(static_cast<std::size_t>(depth + 1));
  for (Vertex v = 0; v < d; ++v) layers[static_cast<std::size_t>(layer[static_cast<std::size_t>(v)])].push_back(v);
  return HierarchicalOrder(std::move(layers));
}

LinearOrder random_topological_order(const Dag& g, std::uint64_t seed) {
  const int d = g.size();
  std::mt19937_64 rng(seed);
  std::vector<int> indegree(static_cast<std::size_t>(d), 0);
  for (const auto& [from, to] : g.edges()) ++indegree[static_cast<std::size_t>(to)];
  std::vector<Vertex> ready;
  for (Vertex v = 0; v < d; ++v)
    if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
  std::vector<Vertex> perm;
  perm.reserve(static_cast<std::size_t>(d));
  while (!ready.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
    const std::size_t k = pick(rng);
    const Vertex v = ready[k];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(k));
    perm.push_back(v);
    for (Vertex c : g.children(v))
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
  }
  if (static_cast<int>(perm.size()) != d) throw StructuralError("graph contains a directed cycle");
  return LinearOrder(std::move(perm));
}

LinearOrder linearize(const HierarchicalOrder& h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vertex> perm;
  perm.reserve(static_cast<std::size_t>(h.size()));
  for (const auto& layer : h.layers()) {
    VertexSet shuffled = layer;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    perm.insert(perm.end(), shuffled.begin(), shuffled.end());
  }
  return LinearOrder(std::move(perm));
}

Dag erdos_renyi_dag(int d, double expected_edges, std::uint64_t seed) {
  if (d < 1) throw ParameterError("erdos_renyi_dag: d must be >= 1");
  const double pairs = 0.5 * static_cast<double>(d) * static_cast<double>(d - 1);
  if (!(expected_edges >= 0.0) || (d > 1 && expected_edges > pairs)) {
    throw ParameterError("erdos_renyi_dag: expected_edges must lie in [0, d(d-1)/2]");
  }
  Dag g(d);
  if (d == 1) return g;
  const double p = expected_edges / pairs;
  std::mt19937_64 rng(seed);
  std::vector<Vertex> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      if (unit(rng) < p) g.add_edge(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
  return g;
}

Dag relabel(const Dag& g, std::span<const Vertex> new_label) {
  if (static_cast<int>(new_label.size()) != g.size()) throw ParameterError("relabel: label count mismatch");
  Dag out(g.size());
  for (const auto& [from, to] : g.edges())
    out.add_edge(new_label[static_cast<std::size_t>(from)], new_label[static_cast<std::size_t>(to)]);
  return out;
}

void for_each_forward_dag(int d, const std::function<void(const Dag&)>& visit) {
  std::vector<Edge> slots;
  for (Vertex i = 0; i < d; ++i)
    for (Vertex j = i + 1; j < d; ++j) slots.emplace_back(i, j);
  if (slots.size() >= 63) throw ParameterError("for_each_forward_dag: d too large to enumerate");
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Dag g(d);
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1U) g.add_edge(slots[s].first, slots[s].second);
    visit(g);
  }
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace hts
