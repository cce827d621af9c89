#include <algorithm>
#include <vector>

#include "hts/error.hpp"
#include "hts/graph.hpp"

namespace hts {

// Reachability over (vertex, direction) states. A trail arriving from a child
// travels "up"; one arriving from a parent travels "down". A non-collider passes
// only when unobserved, a collider only when it or one of its descendants is in Z.
bool d_separated(const Dag& g, Vertex i, Vertex j, const VertexSet& z) {
  const int d = g.size();
  if (i < 0 || i >= d || j < 0 || j >= d) throw ParameterError("d_separated: vertex out of range");
  if (i == j) throw ParameterError("d_separated: endpoints must differ");
  if (std::find(z.begin(), z.end(), i) != z.end() || std::find(z.begin(), z.end(), j) != z.end()) {
    throw ParameterError("d_separated: endpoints must not be in the conditioning set");
  }

  std::vector<std::uint8_t> observed(static_cast<std::size_t>(d), 0);
  std::vector<std::uint8_t> opens_collider(static_cast<std::size_t>(d), 0);
  std::vector<Vertex> stack;
  for (Vertex v : z) {
    if (v < 0 || v >= d) throw ParameterError("d_separated: conditioning vertex out of range");
    observed[static_cast<std::size_t>(v)] = 1;
    if (!opens_collider[static_cast<std::size_t>(v)]) {
      opens_collider[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex p : g.parents(v)) {
      if (!opens_collider[static_cast<std::size_t>(p)]) {
        opens_collider[static_cast<std::size_t>(p)] = 1;
        stack.push_back(p);
      }
    }
  }

  enum Dir : int { up = 0, down = 1 };
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(2 * d), 0);
  std::vector<std::pair<Vertex, Dir>> frontier{{i, up}};
  while (!frontier.empty()) {
    const auto [v, dir] = frontier.back();
    frontier.pop_back();
    auto& seen = visited[static_cast<std::size_t>(2 * v + dir)];
    if (seen) continue;
    seen = 1;
    const bool obs = observed[static_cast<std::size_t>(v)] != 0;
    if (v == j && !obs) return false;
    if (dir == up && !obs) {
      for (Vertex p : g.parents(v)) frontier.emplace_back(p, up);
      for (Vertex c : g.children(v)) frontier.emplace_back(c, down);
    } else if (dir == down) {
      if (!obs)
        for (Vertex c : g.children(v)) frontier.emplace_back(c, down);
      if (opens_collider[static_cast<std::size_t>(v)])
        for (Vertex p : g.parents(v)) frontier.emplace_back(p, up);
    }
  }
  return true;
}

}  // namespace hts
