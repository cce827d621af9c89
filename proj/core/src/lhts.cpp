#include "hts/lhts.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "hts/error.hpp"
#include "hts/seed.hpp"

namespace hts {

Ars::Ars(int d) : d_(d) {
  if (d < 0) throw ParameterError("Ars: negative size");
  const auto cells = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  rel_.assign(cells, ApRelation::unknown);
  stage_.assign(cells, 0);
}

std::size_t Ars::index(Vertex i, Vertex j) const {
  if (i < 0 || j < 0 || i >= d_ || j >= d_ || i == j) throw ParameterError("Ars: bad vertex pair");
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(j);
}

ApRelation Ars::at(Vertex i, Vertex j) const { return rel_[index(i, j)]; }

int Ars::provenance(Vertex i, Vertex j) const { return stage_[index(i, j)]; }

void Ars::set_unrelated(Vertex i, Vertex j, ApRelation kind, int stage) {
  if (kind != ApRelation::unrelated_ap1 && kind != ApRelation::unrelated_ap2 && kind != ApRelation::unknown) {
    throw ParameterError("Ars::set_unrelated: not a symmetric relation");
  }
  rel_[index(i, j)] = rel_[index(j, i)] = kind;
  stage_[index(i, j)] = stage_[index(j, i)] = static_cast<std::uint8_t>(stage);
}

void Ars::set_ancestor(Vertex ancestor, Vertex descendant, int stage) {
  rel_[index(ancestor, descendant)] = ApRelation::ancestor_of;
  rel_[index(descendant, ancestor)] = ApRelation::descendant_of;
  stage_[index(ancestor, descendant)] = stage_[index(descendant, ancestor)] = static_cast<std::uint8_t>(stage);
}

VertexSet Ars::known_ancestors(Vertex v) const {
  VertexSet out;
  for (Vertex u = 0; u < d_; ++u)
    if (u != v && at(u, v) == ApRelation::ancestor_of) out.push_back(u);
  return out;
}

VertexSet Ars::mutual_ancestors(Vertex i, Vertex j) const {
  VertexSet out;
  for (Vertex m = 0; m < d_; ++m) {
    if (m == i || m == j) continue;
    if (at(m, i) == ApRelation::ancestor_of && at(m, j) == ApRelation::ancestor_of) out.push_back(m);
  }
  return out;
}

std::vector<Edge> Ars::unknown_pairs() const {
  std::vector<Edge> out;
  for (Vertex i = 0; i < d_; ++i)
    for (Vertex j = i + 1; j < d_; ++j)
      if (at(i, j) == ApRelation::unknown) out.emplace_back(i, j);
  return out;
}

std::string to_string(ApRelation r) {
  switch (r) {
    case ApRelation::unknown:
      return "unknown";
    case ApRelation::unrelated_ap1:
      return "unrelated_ap1";
    case ApRelation::unrelated_ap2:
      return "unrelated_ap2";
    case ApRelation::ancestor_of:
      return "ancestor_of";
    case ApRelation::descendant_of:
      return "descendant_of";
  }
  return "unknown";
}

namespace {

// Removes from `v` its projection on each (mutually orthogonal) basis vector.
void project_out(Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& basis) {
  for (const auto& b : basis) v -= (v.dot(b) / b.squaredNorm()) * b;
}

std::vector<Eigen::VectorXd> orthogonal_basis(const std::vector<Eigen::VectorXd>& columns, double tol) {
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::VectorXd v : columns) {
    project_out(v, basis);
    if (v.norm() > tol) basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

DataLinearVerdicts::DataLinearVerdicts(const Dataset& ds, const TestConfig& cfg) : ds_(ds), cfg_(cfg) {
  cfg_.validate();
}

TestConfig DataLinearVerdicts::next_config() {
  TestConfig c = cfg_;
  c.seed = derive_seed(cfg_.seed, calls_++);
  return c;
}

TestResult DataLinearVerdicts::independent(Vertex i, Vertex j) {
  return marginal_independent(ds_.column(i), ds_.column(j), next_config());
}

std::pair<TestResult, TestResult> DataLinearVerdicts::residual_pattern(Vertex i, Vertex j, const VertexSet& mutual) {
  // Mutual ancestors are removed with univariate regressions in ascending id
  // order; the residualized regressors are orthogonalized as they go.
  auto centered = [&](Vertex v) {
    Eigen::VectorXd c = ds_.column(v);
    c.array() -= c.mean();
    return c;
  };
  std::vector<Eigen::VectorXd> cols;
  for (Vertex m : mutual) cols.push_back(centered(m));
  const double tol = 1e-10 * std::sqrt(static_cast<double>(ds_.rows()));
  const auto basis = orthogonal_basis(cols, tol);

  Eigen::VectorXd xi = centered(i);
  Eigen::VectorXd xj = centered(j);
  project_out(xi, basis);
  project_out(xj, basis);

  const Eigen::VectorXd r_ij = ols_residuals(xj, xi).residual;
  const Eigen::VectorXd r_ji = ols_residuals(xi, xj).residual;
  auto forward = marginal_independent(xi, r_ij, next_config());
  auto backward = marginal_independent(xj, r_ji, next_config());
  return {forward, backward};
}

LinearSemOracle::LinearSemOracle(const Dag& g, std::uint64_t weight_seed) : g_(g) {
  const int d = g.size();
  std::mt19937_64 rng(weight_seed);
  std::uniform_real_distribution<double> magnitude(0.5, 1.5);
  mixing_ = Eigen::MatrixXd::Zero(d, d);
  const auto layered = true_hierarchical_order(g);
  for (const auto& layer : layered.layers()) {
    for (Vertex v : layer) {
      mixing_(v, v) = 1.0;
      for (Vertex p : g.parents(v)) {
        const double w = (rng() & 1U) ? magnitude(rng) : -magnitude(rng);
        mixing_.row(v) += w * mixing_.row(p);
      }
    }
  }
}

namespace {

TestResult oracle_result(bool independent) { return {0.0, independent ? 1.0 : 0.0, independent}; }

bool disjoint_support(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  for (Eigen::Index k = 0; k < a.size(); ++k)
    if (std::abs(a[k]) > tol && std::abs(b[k]) > tol) return false;
  return true;
}

}  // namespace

TestResult LinearSemOracle::independent(Vertex i, Vertex j) { return oracle_result(d_separated(g_, i, j, {})); }

std::pair<TestResult, TestResult> LinearSemOracle::residual_pattern(Vertex i, Vertex j, const VertexSet& mutual) {
  const double tol = 1e-9 * std::max(1.0, mixing_.cwiseAbs().maxCoeff());
  std::vector<Eigen::VectorXd> rows;
  for (Vertex m : mutual) rows.emplace_back(mixing_.row(m).transpose());
  const auto basis = orthogonal_basis(rows, tol);
  Eigen::VectorXd a = mixing_.row(i).transpose();
  Eigen::VectorXd b = mixing_.row(j).transpose();
  project_out(a, basis);
  project_out(b, basis);
  if (a.norm() <= tol || b.norm() <= tol) throw DegenerateDataError("residualized variable vanished");

  const Eigen::VectorXd r_ab = b - (b.dot(a) / a.squaredNorm()) * a;
  const Eigen::VectorXd r_ba = a - (a.dot(b) / b.squaredNorm()) * b;
  return {oracle_result(disjoint_support(a, r_ab, tol)), oracle_result(disjoint_support(b, r_ba, tol))};
}

namespace {

void record(LhtsDiagnostics& diag, int stage, Vertex i, Vertex j, const char* kind, int conditioning,
            const TestResult& r) {
  ++diag.tests;
  diag.trace.push_back({stage, i, j, kind, conditioning, r.p_value, r.independent});
}

void record_error(LhtsDiagnostics& diag, int stage, Vertex i, Vertex j, const std::exception& e) {
  diag.errors.push_back("stage " + std::to_string(stage) + " pair (" + std::to_string(i) + "," + std::to_string(j) +
                        "): " + e.what());
}

void check_size(const LinearVerdicts& v, const Ars& ars) {
  if (v.size() != ars.size()) throw ParameterError("relation table size does not match the data");
}

enum class PairOutcome { unresolved, unrelated, forward, backward };

PairOutcome classify(const TestResult& forward, const TestResult& backward) {
  if (forward.independent && backward.independent) return PairOutcome::unrelated;
  if (forward.independent) return PairOutcome::forward;
  if (backward.independent) return PairOutcome::backward;
  return PairOutcome::unresolved;
}

PairOutcome test_pair(LinearVerdicts& verdicts, int stage, Vertex i, Vertex j, const VertexSet& mutual,
                      LhtsDiagnostics& diag) {
  const auto [forward, backward] = verdicts.residual_pattern(i, j, mutual);
  const int m = static_cast<int>(mutual.size());
  record(diag, stage, i, j, "forward", m, forward);
  record(diag, stage, i, j, "backward", m, backward);
  return classify(forward, backward);
}

}  // namespace

Ars lhts_stage1(LinearVerdicts& verdicts, Ars ars, LhtsDiagnostics& diag) {
  check_size(verdicts, ars);
  for (const auto& [i, j] : ars.unknown_pairs()) {
    try {
      const auto r = verdicts.independent(i, j);
      record(diag, 1, i, j, "marginal", 0, r);
      if (r.independent) ars.set_unrelated(i, j, ApRelation::unrelated_ap1, 1);
    } catch (const Error& e) {
      record_error(diag, 1, i, j, e);
    }
  }
  return ars;
}

Ars lhts_stage2(LinearVerdicts& verdicts, Ars ars, LhtsDiagnostics& diag) {
  check_size(verdicts, ars);
  for (const auto& [i, j] : ars.unknown_pairs()) {
    try {
      // Both-independent stays unknown here; stage 3 revisits it with mutual ancestors.
      switch (test_pair(verdicts, 2, i, j, {}, diag)) {
        case PairOutcome::forward:
          ars.set_ancestor(i, j, 2);
          break;
        case PairOutcome::backward:
          ars.set_ancestor(j, i, 2);
          break;
        default:
          break;
      }
    } catch (const Error& e) {
      record_error(diag, 2, i, j, e);
    }
  }
  return ars;
}

Ars lhts_stage3(LinearVerdicts& verdicts, Ars ars, LhtsDiagnostics& diag) {
  check_size(verdicts, ars);
  // A pair whose mutual-ancestor set has not changed since it was last tested
  // would see the same regression, so it is not re-tested. Stage 2 tested every
  // surviving pair with M empty.
  std::map<Edge, VertexSet> last_tested;
  while (true) {
    const auto pending = ars.unknown_pairs();
    if (pending.empty()) break;
    ++diag.stage3_passes;

    struct Update {
      Vertex i, j;
      PairOutcome outcome;
    };
    std::vector<Update> updates;
    for (const auto& pair : pending) {
      const auto [i, j] = pair;
      auto mutual = ars.mutual_ancestors(i, j);
      auto it = last_tested.find(pair);
      const bool seen = it != last_tested.end() ? it->second == mutual : mutual.empty();
      if (seen) continue;
      last_tested[pair] = mutual;
      try {
        const auto outcome = test_pair(verdicts, 3, i, j, mutual, diag);
        if (outcome != PairOutcome::unresolved) updates.push_back({i, j, outcome});
      } catch (const Error& e) {
        record_error(diag, 3, i, j, e);
      }
    }

    if (updates.empty()) {
      for (const auto& [i, j] : pending) ars.set_unrelated(i, j, ApRelation::unrelated_ap2, 3);
      diag.stall_guard_fired = true;
      break;
    }
    for (const auto& u : updates) {
      if (u.outcome == PairOutcome::unrelated) ars.set_unrelated(u.i, u.j, ApRelation::unrelated_ap2, 3);
      if (u.outcome == PairOutcome::forward) ars.set_ancestor(u.i, u.j, 3);
      if (u.outcome == PairOutcome::backward) ars.set_ancestor(u.j, u.i, 3);
    }
  }
  return ars;
}

Ars lhts_stage1(const Dataset& ds, const TestConfig& cfg, Ars ars) {
  DataLinearVerdicts v(ds, cfg);
  LhtsDiagnostics diag;
  return lhts_stage1(v, std::move(ars), diag);
}

Ars lhts_stage2(const Dataset& ds, const TestConfig& cfg, Ars ars) {
  DataLinearVerdicts v(ds, cfg);
  LhtsDiagnostics diag;
  return lhts_stage2(v, std::move(ars), diag);
}

Ars lhts_stage3(const Dataset& ds, const TestConfig& cfg, Ars ars) {
  DataLinearVerdicts v(ds, cfg);
  LhtsDiagnostics diag;
  return lhts_stage3(v, std::move(ars), diag);
}

AncestorSortResult ancestor_sort_checked(const Ars& ars) {
  const int d = ars.size();
  std::vector<bool> sorted(static_cast<std::size_t>(d), false);
  std::vector<VertexSet> layers;
  bool repaired = false;
  int remaining = d;

  auto unsorted_ancestors = [&](Vertex v) {
    int count = 0;
    for (Vertex u = 0; u < d; ++u)
      if (u != v && !sorted[static_cast<std::size_t>(u)] && ars.at(u, v) == ApRelation::ancestor_of) ++count;
    return count;
  };

  while (remaining > 0) {
    VertexSet layer;
    Vertex fallback = -1;
    int fewest = d + 1;
    for (Vertex v = 0; v < d; ++v) {
      if (sorted[static_cast<std::size_t>(v)]) continue;
      const int c = unsorted_ancestors(v);
      if (c == 0) layer.push_back(v);
      if (c < fewest) {
        fewest = c;
        fallback = v;
      }
    }
    if (layer.empty()) {
      layer.push_back(fallback);
      repaired = true;
    }
    for (Vertex v : layer) sorted[static_cast<std::size_t>(v)] = true;
    remaining -= static_cast<int>(layer.size());
    layers.push_back(std::move(layer));
  }
  if (d == 0) return {HierarchicalOrder(), false};
  return {HierarchicalOrder(std::move(layers)), repaired};
}

HierarchicalOrder ancestor_sort(const Ars& ars) { return ancestor_sort_checked(ars).order; }

LhtsResult lhts(LinearVerdicts& verdicts) {
  LhtsResult out;
  Ars ars(verdicts.size());
  ars = lhts_stage1(verdicts, std::move(ars), out.diagnostics);
  ars = lhts_stage2(verdicts, std::move(ars), out.diagnostics);
  ars = lhts_stage3(verdicts, std::move(ars), out.diagnostics);
  auto sorted = ancestor_sort_checked(ars);
  out.order = std::move(sorted.order);
  out.diagnostics.cycle_repaired = sorted.cycle_repaired;
  out.ars = std::move(ars);
  return out;
}

LhtsResult lhts(const Dataset& ds, const TestConfig& cfg) {
  DataLinearVerdicts v(ds, cfg);
  return lhts(v);
}

}  // namespace hts
