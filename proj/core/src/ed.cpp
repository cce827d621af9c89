#include "hts/ed.hpp"

#include <algorithm>
#include <functional>

#include "hts/error.hpp"
#include "hts/seed.hpp"

namespace hts {

std::map<int, int> EdResult::z_histogram() const {
  std::map<int, int> h;
  for (const auto& t : trace) ++h[t.z_size];
  return h;
}

bool ed_oracle_verdict(const Dag& g, Vertex i, Vertex j, const VertexSet& z) { return d_separated(g, i, j, z); }

namespace {

// Runs the tests and keeps the bookkeeping shared by both schedules.
class EdEngine {
 public:
  EdEngine(const Dataset& ds, int d, const EdConfig& cfg) : ds_(ds), cfg_(cfg), result_{ParentSets(d), {}, 0, 0, {}} {
    cfg_.ci.validate();
    if (cfg_.oracle) {
      if (cfg_.oracle->size() != d) throw ParameterError("ED: oracle graph does not match the order");
      if (ds_.cols() != 0 && ds_.cols() != d) throw ParameterError("ED: oracle graph does not match the dataset");
    } else if (ds_.cols() != d) {
      throw ParameterError("ED: order does not cover the dataset's vertices");
    }
  }

  const VertexSet& parents(Vertex v) const { return result_.parents.of(v); }

  // Tests x_i -> x_j given Pa(x_i) (or its dependent part) and the supplied
  // target-side parents; adds the edge on a dependent verdict.
  void test(Vertex i, Vertex j, const VertexSet& target_side) {
    VertexSet confounders;
    try {
      confounders = cfg_.strict_confounders ? dependent_parents(i, j) : parents(i);
    } catch (const Error& e) {
      log(i, j, e);
      return;
    }
    const VertexSet z = set_union(confounders, target_side);
    ++result_.tests;
    result_.max_z = std::max(result_.max_z, static_cast<int>(z.size()));
    try {
      const auto r = ci(i, j, z);
      result_.trace.push_back({i, j, static_cast<int>(z.size()), r.p_value, !r.independent});
      if (!r.independent) result_.parents.add(i, j);
    } catch (const Error& e) {
      result_.trace.push_back({i, j, static_cast<int>(z.size()), 1.0, false});
      log(i, j, e);
    }
  }

  void confirm(int d) {
    const ParentSets found = result_.parents;
    ParentSets kept(d);
    for (Vertex j = 0; j < d; ++j) {
      for (Vertex i : found.of(j)) {
        VertexSet others;
        for (Vertex p : found.of(j))
          if (p != i) others.push_back(p);
        const VertexSet z = set_union(found.of(i), others);
        ++result_.tests;
        result_.max_z = std::max(result_.max_z, static_cast<int>(z.size()));
        try {
          const auto r = ci(i, j, z);
          result_.trace.push_back({i, j, static_cast<int>(z.size()), r.p_value, !r.independent});
          if (!r.independent) kept.add(i, j);
        } catch (const Error& e) {
          log(i, j, e);
        }
      }
    }
    result_.parents = std::move(kept);
  }

  EdResult take() { return std::move(result_); }

 private:
  TestResult ci(Vertex i, Vertex j, const VertexSet& z) {
    if (cfg_.oracle) {
      const bool sep = ed_oracle_verdict(*cfg_.oracle, i, j, z);
      return {0.0, sep ? 1.0 : 0.0, sep};
    }
    Eigen::MatrixXd zm(ds_.rows(), static_cast<Eigen::Index>(z.size()));
    for (std::size_t k = 0; k < z.size(); ++k) zm.col(static_cast<Eigen::Index>(k)) = ds_.values().col(z[k]);
    TestConfig c = cfg_.ci;
    c.seed = derive_seed(cfg_.ci.seed, calls_++);
    return conditional_independent(ds_.column(i), ds_.column(j), zm, c);
  }

  VertexSet dependent_parents(Vertex i, Vertex j) {
    VertexSet out;
    for (Vertex k : parents(i)) {
      ++result_.tests;
      if (!ci(k, j, {}).independent) out.push_back(k);
    }
    return out;
  }

  void log(Vertex i, Vertex j, const std::exception& e) {
    result_.errors.push_back("pair (" + std::to_string(i) + "," + std::to_string(j) + "): " + e.what());
  }

  const Dataset& ds_;
  EdConfig cfg_;
  EdResult result_;
  std::uint64_t calls_ = 0;
};

}  // namespace

EdResult ed_linear_run(const Dataset& ds, const LinearOrder& order, const EdConfig& cfg) {
  EdEngine engine(ds, order.size(), cfg);
  for (int pj = 1; pj < order.size(); ++pj) {
    const Vertex j = order.at(pj);
    for (int pi = pj - 1; pi >= 0; --pi) {
      const Vertex i = order.at(pi);
      const VertexSet target_side = engine.parents(j);
      engine.test(i, j, target_side);
    }
  }
  if (cfg.confirm_edges) engine.confirm(order.size());
  return engine.take();
}

ParentSets ed_linear(const Dataset& ds, const LinearOrder& order, const EdConfig& cfg) {
  return ed_linear_run(ds, order, cfg).parents;
}

EdResult ed_hierarchical_run(const Dataset& ds, const HierarchicalOrder& order, const EdConfig& cfg) {
  EdEngine engine(ds, order.size(), cfg);
  for (int l = 1; l < order.layer_count(); ++l) {
    for (Vertex j : order.layer(l)) {
      for (int s = l - 1; s >= 0; --s) {
        VertexSet between;
        for (Vertex p : engine.parents(j))
          if (order.layer_of(p) > s && order.layer_of(p) < l) between.push_back(p);
        for (Vertex i : order.layer(s)) engine.test(i, j, between);
      }
    }
  }
  if (cfg.confirm_edges) engine.confirm(order.size());
  return engine.take();
}

ParentSets ed_hierarchical(const Dataset& ds, const HierarchicalOrder& order, const EdConfig& cfg) {
  return ed_hierarchical_run(ds, order, cfg).parents;
}

}  // namespace hts
