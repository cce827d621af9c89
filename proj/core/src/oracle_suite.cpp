#include "hts/oracle_suite.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <random>

#include "hts/ed.hpp"
#include "hts/graph.hpp"
#include "hts/lhts.hpp"
#include "hts/metrics.hpp"
#include "hts/nhts.hpp"
#include "hts/seed.hpp"

namespace hts {

namespace {

std::string describe(const Dag& g) {
  std::string s = "d=" + std::to_string(g.size()) + " edges";
  for (const auto& [a, b] : g.edges()) s += " " + std::to_string(a) + "->" + std::to_string(b);
  return s;
}

std::string describe(const HierarchicalOrder& h) {
  std::string s;
  for (const auto& layer : h.layers()) {
    s += "{";
    for (std::size_t k = 0; k < layer.size(); ++k) s += (k ? "," : "") + std::to_string(layer[k]);
    s += "}";
  }
  return s;
}

// Returns an empty string when the graph passes, otherwise a description.
using GraphCheck = std::function<std::string(const Dag&, std::uint64_t)>;

SuiteCheck run_suite_check(const std::string& name, int dmax, int random_graphs, std::uint64_t seed,
                           const GraphCheck& check) {
  SuiteCheck out;
  out.name = name;
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t counter = 0;
  auto visit = [&](const Dag& g) {
    const std::uint64_t s = derive_seed(seed, counter++);
    ++out.graphs;
    const std::string failure = check(g, s);
    if (!failure.empty()) {
      if (out.failures == 0) out.first_failure = failure + " on " + describe(g);
      ++out.failures;
    }
  };
  for (int d = 1; d <= dmax; ++d) {
    for_each_forward_dag(d, [&](const Dag& forward) {
      std::vector<Vertex> label(static_cast<std::size_t>(d));
      std::iota(label.begin(), label.end(), 0);
      std::mt19937_64 rng(derive_seed(seed ^ 0x5bd1e995ULL, counter));
      std::shuffle(label.begin(), label.end(), rng);
      visit(relabel(forward, label));
    });
  }
  const int max_edges = 28;
  for (int k = 0; k < random_graphs; ++k) {
    const double expected = std::min<double>(max_edges, 8.0 * (1 + k % 4));
    visit(erdos_renyi_dag(8, expected, derive_seed(seed ^ 0x8badf00dULL, static_cast<std::uint64_t>(k))));
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

EdConfig oracle_config(const Dag& g, bool confirm) {
  EdConfig cfg;
  cfg.oracle = g;
  cfg.confirm_edges = confirm;
  return cfg;
}

std::string compare_parents(const ParentSets& got, const Dag& g) {
  if (got == ParentSets::from_dag(g)) return {};
  const auto s = edge_f1(got, g);
  return "F1 " + std::to_string(s.f1);
}

}  // namespace

SuiteCheck check_ed_oracle(int dmax, int random_graphs, std::uint64_t seed, bool confirm) {
  const std::string name = confirm ? "ed_linear+confirm" : "ed_linear";
  return run_suite_check(name, dmax, random_graphs, seed, [confirm](const Dag& g, std::uint64_t s) {
    return compare_parents(ed_linear(Dataset(), random_topological_order(g, s), oracle_config(g, confirm)), g);
  });
}

SuiteCheck check_ed_hierarchical_oracle(int dmax, int random_graphs, std::uint64_t seed, bool confirm) {
  const std::string name = confirm ? "ed_hierarchical+confirm" : "ed_hierarchical";
  return run_suite_check(name, dmax, random_graphs, seed, [confirm](const Dag& g, std::uint64_t) {
    return compare_parents(ed_hierarchical(Dataset(), true_hierarchical_order(g), oracle_config(g, confirm)), g);
  });
}

SuiteCheck check_lhts_oracle(int dmax, int random_graphs, std::uint64_t seed) {
  return run_suite_check("lhts", dmax, random_graphs, seed, [](const Dag& g, std::uint64_t s) -> std::string {
    LinearSemOracle oracle(g, s);
    const auto r = lhts(oracle);
    if (r.order == true_hierarchical_order(g)) return {};
    return "layers " + describe(r.order);
  });
}

SuiteCheck check_nhts_oracle(int dmax, int random_graphs, std::uint64_t seed) {
  return run_suite_check("nhts", dmax, random_graphs, seed, [](const Dag& g, std::uint64_t) -> std::string {
    GraphNonlinearOracle oracle(g);
    const auto r = nhts(oracle, default_pairwise_kernel(), default_layer_kernel());
    VertexSet isolated, roots;
    for (Vertex v = 0; v < g.size(); ++v) {
      if (!g.parents(v).empty()) continue;
      (g.children(v).empty() ? isolated : roots).push_back(v);
    }
    if (r.prs.isolated != isolated) return "isolated set differs";
    if (r.prs.known_roots != roots) return "root set differs";
    if (r.order != true_hierarchical_order(g)) return "layers " + describe(r.order);
    return {};
  });
}

SuiteCheck check_stage4_counters(const std::vector<int>& sizes) {
  SuiteCheck out;
  out.name = "stage4_counters";
  const auto start = std::chrono::steady_clock::now();
  for (int d : sizes) {
    ++out.graphs;
    Dag g(d);
    for (Vertex a = 0; a < d; ++a)
      for (Vertex b = a + 1; b < d; ++b) g.add_edge(a, b);
    GraphNonlinearOracle oracle(g);
    const auto r = nhts(oracle, default_pairwise_kernel(), default_layer_kernel());
    std::string failure;
    for (int k = 1; k <= d - 2 && failure.empty(); ++k) {
      // Round k regresses on the k vertices sorted so far.
      const int nk = r.trace.regression_count(4, k);
      if (nk != d - k) {
        failure = "d=" + std::to_string(d) + " k=" + std::to_string(k) + ": n_k=" + std::to_string(nk);
      }
    }
    if (!failure.empty()) {
      if (out.failures == 0) out.first_failure = failure;
      ++out.failures;
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<SuiteCheck> run_oracle_suites(int dmax, int random_graphs, std::uint64_t seed) {
  return {check_ed_oracle(dmax, random_graphs, seed, false),
          check_ed_oracle(dmax, random_graphs, seed, true),
          check_ed_hierarchical_oracle(dmax, random_graphs, seed, false),
          check_ed_hierarchical_oracle(dmax, random_graphs, seed, true),
          check_lhts_oracle(dmax, random_graphs, seed), check_nhts_oracle(dmax, random_graphs, seed),
          check_stage4_counters({5, 8})};
}

}  // namespace hts
