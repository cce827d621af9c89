#include "hts/nhts.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <limits>

#include "hts/error.hpp"
#include "hts/seed.hpp"

namespace hts {

Prs::Prs(int size) : d(size), dependent(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0) {}

bool Prs::is_dependent(Vertex i, Vertex j) const {
  if (i == j) return false;
  return dependent[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] != 0;
}

bool Prs::is_pp2(Vertex parent, Vertex child) const {
  return std::binary_search(pp2_parents.begin(), pp2_parents.end(), Edge{parent, child});
}

VertexSet Prs::pp2_children(Vertex v) const {
  VertexSet out;
  for (const auto& [p, c] : pp2_parents)
    if (p == v) out.push_back(c);
  return out;
}

VertexSet build_pij(const Prs& prs, Vertex i, Vertex j) {
  VertexSet out;
  for (Vertex k = 0; k < prs.d; ++k) {
    if (k == i || k == j) continue;
    if (!prs.is_dependent(k, i) && prs.is_dependent(k, j)) out.push_back(k);
  }
  return out;
}

int SortTrace::regression_count(int stage, int covariates) const {
  return static_cast<int>(std::count_if(regressions.begin(), regressions.end(), [&](const RegressionRecord& r) {
    return r.stage == stage && (covariates < 0 || r.covariates == covariates);
  }));
}

DataNonlinearVerdicts::DataNonlinearVerdicts(const Dataset& ds, const TestConfig& cfg) : ds_(ds), cfg_(cfg) {
  cfg_.validate();
}

TestConfig DataNonlinearVerdicts::next_config() {
  TestConfig c = cfg_;
  c.seed = derive_seed(cfg_.seed, calls_++);
  return c;
}

Eigen::MatrixXd DataNonlinearVerdicts::columns(const VertexSet& vs) const {
  Eigen::MatrixXd out(ds_.rows(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = ds_.values().col(vs[k]);
  return out;
}

TestResult DataNonlinearVerdicts::independent(Vertex i, Vertex j) {
  return marginal_independent(ds_.column(i), ds_.column(j), next_config());
}

TestResult DataNonlinearVerdicts::residual_independent(Vertex target, const VertexSet& covariates, Vertex probe,
                                                       const KernelSpec& kernel) {
  const Eigen::VectorXd r = krr_residuals(ds_.column(target), columns(covariates), kernel);
  return marginal_independent(ds_.column(probe), r, next_config());
}

TestResult DataNonlinearVerdicts::residual_independent_of_all(Vertex target, const VertexSet& covariates,
                                                              const KernelSpec& kernel) {
  const Eigen::VectorXd r = krr_residuals(ds_.column(target), columns(covariates), kernel);
  TestResult worst{0.0, 1.0, true};
  for (Vertex s : covariates) {
    const auto t = marginal_independent(ds_.column(s), r, next_config());
    if (t.p_value < worst.p_value) worst = t;
    if (!t.independent) worst.independent = false;
  }
  return worst;
}

TestResult DataNonlinearVerdicts::conditionally_independent(Vertex i, Vertex j, const VertexSet& given) {
  return conditional_independent(ds_.column(i), ds_.column(j), columns(given), next_config());
}

namespace {

TestResult oracle_result(bool independent) { return {0.0, independent ? 1.0 : 0.0, independent}; }

}  // namespace

GraphNonlinearOracle::GraphNonlinearOracle(const Dag& g) : g_(g) {
  for (Vertex v = 0; v < g.size(); ++v) descendants_.push_back(relatives(g, v, Kinship::descendants));
}

bool GraphNonlinearOracle::residual_is_noise(Vertex target, const VertexSet& covariates) const {
  if (std::binary_search(covariates.begin(), covariates.end(), target)) return false;
  const auto parents = g_.parents(target);
  if (!std::includes(covariates.begin(), covariates.end(), parents.begin(), parents.end())) return false;
  const auto& de = descendants_[static_cast<std::size_t>(target)];
  for (Vertex s : covariates)
    if (std::binary_search(de.begin(), de.end(), s)) return false;
  return true;
}

TestResult GraphNonlinearOracle::independent(Vertex i, Vertex j) { return oracle_result(d_separated(g_, i, j, {})); }

TestResult GraphNonlinearOracle::residual_independent(Vertex target, const VertexSet& covariates, Vertex,
                                                      const KernelSpec&) {
  return oracle_result(residual_is_noise(target, covariates));
}

TestResult GraphNonlinearOracle::residual_independent_of_all(Vertex target, const VertexSet& covariates,
                                                             const KernelSpec&) {
  return oracle_result(residual_is_noise(target, covariates));
}

TestResult GraphNonlinearOracle::conditionally_independent(Vertex i, Vertex j, const VertexSet& given) {
  return oracle_result(d_separated(g_, i, j, given));
}

namespace {

void log_error(SortTrace& trace, const std::string& where, const std::exception& e) {
  trace.errors.push_back(where + ": " + e.what());
}

std::string pair_label(int stage, Vertex i, Vertex j) {
  return "stage " + std::to_string(stage) + " pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// Vertices reachable from v along recorded PP2 edges.
std::vector<std::vector<bool>> pp2_reachability(const Prs& prs) {
  const auto d = static_cast<std::size_t>(prs.d);
  std::vector<VertexSet> children(d);
  for (const auto& [p, c] : prs.pp2_parents) children[static_cast<std::size_t>(p)].push_back(c);
  std::vector<std::vector<bool>> reach(d, std::vector<bool>(d, false));
  for (std::size_t s = 0; s < d; ++s) {
    std::deque<Vertex> queue(children[s].begin(), children[s].end());
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      if (reach[s][static_cast<std::size_t>(v)]) continue;
      reach[s][static_cast<std::size_t>(v)] = true;
      for (Vertex c : children[static_cast<std::size_t>(v)]) queue.push_back(c);
    }
  }
  return reach;
}

}  // namespace

Prs nhts_stage1(NonlinearVerdicts& verdicts, SortTrace& trace) {
  const int d = verdicts.size();
  Prs prs(d);
  auto mark = [&](Vertex i, Vertex j) {
    prs.dependent[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] = 1;
    prs.dependent[static_cast<std::size_t>(j) * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] = 1;
  };
  for (Vertex i = 0; i < d; ++i) {
    for (Vertex j = i + 1; j < d; ++j) {
      try {
        ++trace.tests;
        if (!verdicts.independent(i, j).independent) mark(i, j);
      } catch (const Error& e) {
        log_error(trace, pair_label(1, i, j), e);
        mark(i, j);
      }
    }
  }
  for (Vertex v = 0; v < d; ++v) {
    bool any = false;
    for (Vertex u = 0; u < d && !any; ++u) any = prs.is_dependent(v, u);
    if (!any) prs.isolated.push_back(v);
  }
  return prs;
}

Prs nhts_stage2(NonlinearVerdicts& verdicts, const KernelSpec& krr, Prs prs, SortTrace& trace) {
  if (prs.d != verdicts.size()) throw ParameterError("parent relation table size does not match the data");
  krr.validate();
  prs.pp2_parents.clear();
  for (Vertex i = 0; i < prs.d; ++i) {
    for (Vertex j = 0; j < prs.d; ++j) {
      if (!prs.is_dependent(i, j)) continue;
      try {
        trace.regressions.push_back({j, 1, 2});
        ++trace.tests;
        bool parent = verdicts.residual_independent(j, {i}, i, krr).independent;
        if (!parent) {
          const auto p = build_pij(prs, i, j);
          if (!p.empty()) {
            const auto covariates = set_union({i}, p);
            trace.regressions.push_back({j, static_cast<int>(covariates.size()), 2});
            ++trace.tests;
            parent = verdicts.residual_independent(j, covariates, i, krr).independent;
          }
        }
        if (parent) prs.pp2_parents.emplace_back(i, j);
      } catch (const Error& e) {
        log_error(trace, pair_label(2, i, j), e);
      }
    }
  }
  std::sort(prs.pp2_parents.begin(), prs.pp2_parents.end());
  // A pair accepted in both directions carries no orientation; leave it unresolved.
  std::vector<Edge> oriented;
  for (const auto& [p, c] : prs.pp2_parents)
    if (!std::binary_search(prs.pp2_parents.begin(), prs.pp2_parents.end(), Edge{c, p})) oriented.emplace_back(p, c);
  prs.pp2_parents = std::move(oriented);
  prs.w.clear();
  for (const auto& [p, c] : prs.pp2_parents)
    if (prs.w.empty() || prs.w.back() != p) prs.w.push_back(p);
  return prs;
}

VertexSet nhts_stage3(NonlinearVerdicts& verdicts, const Prs& prs, SortTrace& trace) {
  if (prs.d != verdicts.size()) throw ParameterError("parent relation table size does not match the data");
  const auto reach = pp2_reachability(prs);
  VertexSet roots;
  for (Vertex i : prs.w) {
    bool descendant = false;
    for (Vertex u : prs.w)
      if (u != i && reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(i)]) descendant = true;
    if (descendant) continue;

    const auto children = prs.pp2_children(i);
    bool root = true;
    for (Vertex j : prs.w) {
      if (j == i || !prs.is_dependent(i, j) || prs.is_pp2(i, j)) continue;
      bool separated_child = false;
      for (Vertex k : children) {
        if (k == j) continue;
        try {
          ++trace.tests;
          if (!verdicts.conditionally_independent(j, k, {i}).independent) {
            separated_child = true;
            break;
          }
        } catch (const Error& e) {
          log_error(trace, pair_label(3, j, k), e);
        }
      }
      if (!separated_child) {
        root = false;
        break;
      }
    }
    if (root) roots.push_back(i);
  }

  if (roots.empty() && !prs.w.empty()) {
    trace.root_guard_fired = true;
    Vertex best = prs.w.front();
    std::size_t most = 0;
    for (Vertex v : prs.w) {
      const auto c = prs.pp2_children(v).size();
      if (c > most) {
        best = v;
        most = c;
      }
    }
    roots.push_back(best);
  } else if (roots.empty() && prs.isolated.empty() && prs.d > 0) {
    // No PP2 relation at all: start from the least connected vertex.
    trace.root_guard_fired = true;
    Vertex best = 0;
    int fewest = std::numeric_limits<int>::max();
    for (Vertex v = 0; v < prs.d; ++v) {
      int c = 0;
      for (Vertex u = 0; u < prs.d; ++u) c += prs.is_dependent(v, u) ? 1 : 0;
      if (c < fewest) {
        fewest = c;
        best = v;
      }
    }
    roots.push_back(best);
  }
  return roots;
}

HierarchicalOrder nhts_stage4(NonlinearVerdicts& verdicts, const KernelSpec& krr, const VertexSet& sorted0,
                              SortTrace& trace, Admission admission) {
  const int d = verdicts.size();
  if (d == 0) return {};
  krr.validate();
  if (sorted0.empty()) throw ParameterError("nhts_stage4: the first layer is empty");
  std::vector<VertexSet> layers{sorted0};
  trace.layer_history.push_back(sorted0);
  VertexSet sorted = sorted0;
  VertexSet unsorted;
  for (Vertex v = 0; v < d; ++v)
    if (!std::binary_search(sorted.begin(), sorted.end(), v)) unsorted.push_back(v);

  while (!unsorted.empty()) {
    VertexSet layer;
    Vertex best = unsorted.front();
    double best_p = -1.0;
    for (Vertex u : unsorted) {
      try {
        trace.regressions.push_back({u, static_cast<int>(sorted.size()), 4});
        trace.tests += static_cast<int>(sorted.size());
        const auto r = verdicts.residual_independent_of_all(u, sorted, krr);
        if (r.independent) layer.push_back(u);
        if (r.p_value > best_p) {
          best_p = r.p_value;
          best = u;
        }
      } catch (const Error& e) {
        log_error(trace, "stage 4 vertex " + std::to_string(u), e);
      }
    }
    if (layer.empty()) {
      ++trace.stall_guard_count;
      layer.push_back(best);
    } else if (admission == Admission::single) {
      layer = {best};
    }
    VertexSet rest;
    std::set_difference(unsorted.begin(), unsorted.end(), layer.begin(), layer.end(), std::back_inserter(rest));
    unsorted = std::move(rest);
    sorted = set_union(sorted, layer);
    trace.layer_history.push_back(layer);
    layers.push_back(std::move(layer));
  }
  return HierarchicalOrder(std::move(layers));
}

Prs nhts_stage1(const Dataset& ds, const TestConfig& cfg) {
  DataNonlinearVerdicts v(ds, cfg);
  SortTrace trace;
  return nhts_stage1(v, trace);
}

Prs nhts_stage2(const Dataset& ds, const TestConfig& cfg, const KernelSpec& krr, Prs prs) {
  DataNonlinearVerdicts v(ds, cfg);
  SortTrace trace;
  return nhts_stage2(v, krr, std::move(prs), trace);
}

VertexSet nhts_stage3(const Dataset& ds, const TestConfig& cfg, const Prs& prs) {
  DataNonlinearVerdicts v(ds, cfg);
  SortTrace trace;
  return nhts_stage3(v, prs, trace);
}

HierarchicalOrder nhts_stage4(const Dataset& ds, const TestConfig& cfg, const KernelSpec& krr,
                              const VertexSet& sorted0) {
  DataNonlinearVerdicts v(ds, cfg);
  SortTrace trace;
  return nhts_stage4(v, krr, sorted0, trace);
}

NhtsResult nhts(NonlinearVerdicts& verdicts, const KernelSpec& krr2, const KernelSpec& krr4, Admission admission) {
  NhtsResult out;
  if (verdicts.size() == 0) return out;
  out.prs = nhts_stage1(verdicts, out.trace);
  if (static_cast<int>(out.prs.isolated.size()) < out.prs.d) {
    out.prs = nhts_stage2(verdicts, krr2, std::move(out.prs), out.trace);
    out.prs.known_roots = nhts_stage3(verdicts, out.prs, out.trace);
  }
  const auto layer0 = set_union(out.prs.isolated, out.prs.known_roots);
  out.order = nhts_stage4(verdicts, krr4, layer0, out.trace, admission);
  return out;
}

NhtsResult nhts(const Dataset& ds, const TestConfig& cfg, const KernelSpec& krr2, const KernelSpec& krr4,
                Admission admission) {
  DataNonlinearVerdicts v(ds, cfg);
  return nhts(v, krr2, krr4, admission);
}

}  // namespace hts
