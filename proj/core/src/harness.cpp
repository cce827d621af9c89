#include "hts/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

#include "hts/ed.hpp"
#include "hts/error.hpp"
#include "hts/graph.hpp"
#include "hts/lhts.hpp"
#include "hts/metrics.hpp"
#include "hts/nhts.hpp"
#include "hts/seed.hpp"
#include "hts/serialize.hpp"

namespace hts {

using nlohmann::json;

MethodSpec MethodSpec::parse(const std::string& text) {
  MethodSpec m;
  const auto plus = text.find('+');
  const std::string sort = text.substr(0, plus);
  const std::string prune = plus == std::string::npos ? "none" : text.substr(plus + 1);
  if (sort == "lhts") m.sort = SortMethod::lhts;
  else if (sort == "nhts") m.sort = SortMethod::nhts;
  else if (sort == "truth") m.sort = SortMethod::truth;
  else if (sort == "random") m.sort = SortMethod::random;
  else if (sort == "nhts_linear") m.sort = SortMethod::nhts_linear;
  else throw ParameterError("unknown sort method '" + sort + "' (expected lhts|nhts|nhts_linear|truth|random)");
  if (prune == "none") m.prune = PruneMethod::none;
  else if (prune == "ed_linear") m.prune = PruneMethod::ed_linear;
  else if (prune == "ed_hierarchical") m.prune = PruneMethod::ed_hierarchical;
  else throw ParameterError("unknown pruning method '" + prune + "' (expected ed_linear|ed_hierarchical|none)");
  return m;
}

std::string MethodSpec::name() const {
  static const char* sorts[] = {"lhts", "nhts", "truth", "random", "nhts_linear"};
  static const char* prunes[] = {"", "+ed_linear", "+ed_hierarchical"};
  return std::string(sorts[static_cast<int>(sort)]) + prunes[static_cast<int>(prune)];
}

void TrialConfig::validate() const {
  if (d < 1) throw ParameterError("d must be >= 1");
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (!oracle && n < 20) throw ParameterError("n must be >= 20");
  if (!(density >= 0.0) || !std::isfinite(density)) throw ParameterError("density must be >= 0");
  if (d > 1 && density * d > d * (d - 1) / 2.0) {
    throw ParameterError("density " + std::to_string(density) + " asks for more edges than a DAG on " +
                         std::to_string(d) + " vertices can hold");
  }
  test_config(seed).validate();
  if (pairwise_kernel) pairwise_kernel->validate();
  if (layer_kernel) layer_kernel->validate();
}

bool TrialConfig::nonstandard_density() const {
  return density != 1.0 && density != 2.0 && density != 3.0 && density != 4.0;
}

TestConfig TrialConfig::test_config(std::uint64_t s) const {
  TestConfig t;
  t.alpha = alpha;
  t.method = test_method;
  t.permutations = permutations;
  t.seed = s;
  return t;
}

namespace {

json kernel_to_json(const KernelSpec& k) {
  if (k.kind == KernelSpec::Kind::rbf) return {{"kind", "rbf"}, {"gamma", k.gamma}, {"ridge", k.ridge}};
  return {{"kind", "polynomial"}, {"degree", k.degree}, {"coef0", k.coef0}, {"scale", k.scale}, {"ridge", k.ridge}};
}

KernelSpec kernel_from_json(const json& j) {
  KernelSpec k;
  const std::string kind = j.value("kind", std::string("rbf"));
  if (kind == "rbf") k.kind = KernelSpec::Kind::rbf;
  else if (kind == "polynomial") k.kind = KernelSpec::Kind::polynomial;
  else throw ParameterError("unknown kernel kind '" + kind + "'");
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    if (key == "gamma") k.gamma = value.get<double>();
    else if (key == "degree") k.degree = value.get<int>();
    else if (key == "coef0") k.coef0 = value.get<double>();
    else if (key == "scale") k.scale = value.get<double>();
    else if (key == "ridge") k.ridge = value.get<double>();
    else throw ParameterError("unknown kernel key '" + key + "'");
  }
  k.validate();
  return k;
}

const char* null_method_name(NullMethod m) { return m == NullMethod::asymptotic ? "asymptotic" : "permutation"; }

NullMethod parse_null_method(const std::string& s) {
  if (s == "asymptotic") return NullMethod::asymptotic;
  if (s == "permutation") return NullMethod::permutation;
  throw ParameterError("unknown test method '" + s + "' (expected asymptotic|permutation)");
}

json config_json(const TrialConfig& c) {
  json j = {{"d", c.d},
            {"n", c.n},
            {"density", c.density},
            {"mechanism", to_string(c.mechanism)},
            {"noise", to_string(c.noise)},
            {"method", c.method.name()},
            {"trials", c.trials},
            {"seed", c.seed},
            {"alpha", c.alpha},
            {"test_method", null_method_name(c.test_method)},
            {"permutations", c.permutations},
            {"oracle", c.oracle},
            {"confirm_edges", c.confirm_edges},
            {"timing", c.record_timing}};
  if (c.pairwise_kernel) j["pairwise_kernel"] = kernel_to_json(*c.pairwise_kernel);
  if (c.layer_kernel) j["layer_kernel"] = kernel_to_json(*c.layer_kernel);
  return j;
}

TrialConfig config_from(const json& j, TrialConfig c) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "d") c.d = v.get<int>();
      else if (key == "n") c.n = v.get<int>();
      else if (key == "density") c.density = v.get<double>();
      else if (key == "mechanism") c.mechanism = parse_mechanism(v.get<std::string>());
      else if (key == "noise") c.noise = parse_noise(v.get<std::string>());
      else if (key == "method") c.method = MethodSpec::parse(v.get<std::string>());
      else if (key == "trials") c.trials = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "test_method") c.test_method = parse_null_method(v.get<std::string>());
      else if (key == "permutations") c.permutations = v.get<int>();
      else if (key == "oracle") c.oracle = v.get<bool>();
      else if (key == "confirm_edges") c.confirm_edges = v.get<bool>();
      else if (key == "timing") c.record_timing = v.get<bool>();
      else if (key == "pairwise_kernel") c.pairwise_kernel = kernel_from_json(v);
      else if (key == "layer_kernel") c.layer_kernel = kernel_from_json(v);
      else throw ParameterError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace

TrialConfig trial_config_from_json(const std::string& text, TrialConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: malformed JSON: ") + e.what());
  }
  return config_from(j, std::move(base));
}

std::string to_json(const TrialConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ParameterError("unknown format '" + s + "' (expected csv|json)");
}

namespace {

double round6(double x) { return std::round(x * 1e6) / 1e6; }

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const ParameterError*>(&e)) return "parameter";
  if (dynamic_cast<const StructuralError*>(&e)) return "structural";
  if (dynamic_cast<const DegenerateDataError*>(&e)) return "degenerate";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  return "internal";
}

LinearOrder random_permutation(int d, std::uint64_t seed) {
  std::vector<Vertex> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return LinearOrder(std::move(perm));
}

HierarchicalOrder singletons(const LinearOrder& order) {
  std::vector<VertexSet> layers;
  for (Vertex v : order.perm()) layers.push_back({v});
  return HierarchicalOrder(std::move(layers));
}

void run_pipeline(const TrialConfig& cfg, std::uint64_t seed, TrialRow& row) {
  const Dag g = erdos_renyi_dag(cfg.d, cfg.density * cfg.d, derive_seed(seed, 1));
  Dataset data;
  if (!cfg.oracle) {
    ScmConfig scm;
    scm.mechanism = cfg.mechanism;
    scm.noise = cfg.noise;
    scm.seed = derive_seed(seed, 2);
    data = simulate(g, cfg.n, scm).data;
  }
  const TestConfig tests = cfg.test_config(derive_seed(seed, 3));
  const KernelSpec k2 = cfg.pairwise_kernel.value_or(default_pairwise_kernel());
  const KernelSpec k4 = cfg.layer_kernel.value_or(default_layer_kernel());

  HierarchicalOrder layered;
  std::optional<LinearOrder> flat;
  switch (cfg.method.sort) {
    case SortMethod::lhts: {
      LhtsResult r;
      if (cfg.oracle) {
        LinearSemOracle oracle(g, derive_seed(seed, 5));
        r = lhts(oracle);
      } else {
        r = lhts(data, tests);
      }
      row.tests += r.diagnostics.tests;
      layered = std::move(r.order);
      break;
    }
    case SortMethod::nhts:
    case SortMethod::nhts_linear: {
      const auto admission = cfg.method.sort == SortMethod::nhts ? Admission::layer : Admission::single;
      NhtsResult r;
      if (cfg.oracle) {
        GraphNonlinearOracle oracle(g);
        r = nhts(oracle, k2, k4, admission);
      } else {
        r = nhts(data, tests, k2, k4, admission);
      }
      row.tests += r.trace.tests;
      layered = std::move(r.order);
      break;
    }
    case SortMethod::truth:
      layered = true_hierarchical_order(g);
      break;
    case SortMethod::random:
      flat = random_permutation(cfg.d, derive_seed(seed, 6));
      layered = singletons(*flat);
      break;
  }
  row.layers = layered.layer_count();
  row.a_top = round6(flat ? a_top(*flat, g) : a_top(layered, g));
  if (cfg.method.prune == PruneMethod::none) return;

  EdConfig ed;
  ed.ci = cfg.test_config(derive_seed(seed, 4));
  if (cfg.oracle) ed.oracle = g;
  ed.confirm_edges = cfg.confirm_edges;
  EdResult pruned;
  if (cfg.method.prune == PruneMethod::ed_linear) {
    const LinearOrder order = flat ? *flat : linearize(layered, derive_seed(seed, 7));
    pruned = ed_linear_run(data, order, ed);
  } else {
    pruned = ed_hierarchical_run(data, layered, ed);
  }
  const auto scores = edge_f1(pruned.parents, g);
  row.f1 = round6(scores.f1);
  row.precision = round6(scores.precision);
  row.recall = round6(scores.recall);
  row.tests += pruned.tests;
  row.max_z = pruned.max_z;
}

}  // namespace

TrialRow run_trial(const TrialConfig& cfg, int trial) {
  TrialRow row;
  row.trial = trial;
  row.seed = cfg.seed + static_cast<std::uint64_t>(trial);
  row.d = cfg.d;
  row.n = cfg.n;
  row.density = cfg.density;
  row.mechanism = to_string(cfg.mechanism);
  row.noise = to_string(cfg.noise);
  row.method = cfg.method.name();
  const auto start = std::chrono::steady_clock::now();
  try {
    run_pipeline(cfg, row.seed, row);
  } catch (const std::exception& e) {
    row.error = std::string(error_kind(e)) + ": " + e.what();
  }
  if (cfg.record_timing) {
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    row.wall_ms = round6(elapsed.count());
  }
  return row;
}

int thread_limit() {
  int limit = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("CAUSAL_HTS_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) limit = std::min(limit, static_cast<int>(cap));
  }
  return limit;
}

SuiteResult run_suite(const TrialConfig& cfg) {
  cfg.validate();
  SuiteResult out;
  out.config = cfg;
  out.rows.resize(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < cfg.trials; t = next++) out.rows[static_cast<std::size_t>(t)] = run_trial(cfg, t);
  };
  const int threads = std::min(thread_limit(), cfg.trials);
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  out.aggregates = aggregate(out.rows);
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ParameterError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::map<std::string, Summary> aggregate(const std::vector<TrialRow>& rows) {
  std::map<std::string, std::vector<double>> columns;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    if (r.a_top) columns["a_top"].push_back(*r.a_top);
    if (r.layers) columns["layers"].push_back(*r.layers);
    if (r.f1) columns["f1"].push_back(*r.f1);
    if (r.precision) columns["precision"].push_back(*r.precision);
    if (r.recall) columns["recall"].push_back(*r.recall);
    columns["tests"].push_back(r.tests);
    columns["max_z"].push_back(r.max_z);
    columns["wall_ms"].push_back(r.wall_ms);
  }
  std::map<std::string, Summary> out;
  for (const auto& [name, v] : columns) {
    out[name] = {round6(quantile(v, 0.5)), round6(quantile(v, 0.25)), round6(quantile(v, 0.75)),
                 static_cast<int>(v.size())};
  }
  return out;
}

namespace {

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string to_csv(const SuiteResult& result) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : result.rows) {
    out += std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.d) + ',' +
           std::to_string(r.n) + ',' + fixed6(r.density) + ',' + r.mechanism + ',' + r.noise + ',' + r.method + ',' +
           (r.a_top ? fixed6(*r.a_top) : "") + ',' + (r.layers ? std::to_string(*r.layers) : "") + ',' +
           (r.f1 ? fixed6(*r.f1) : "") + ',' + (r.precision ? fixed6(*r.precision) : "") + ',' +
           (r.recall ? fixed6(*r.recall) : "") + ',' + std::to_string(r.tests) + ',' + std::to_string(r.max_z) + ',' +
           fixed6(r.wall_ms) + ',' + csv_field(r.error) + '\n';
  }
  return out;
}

std::string to_json(const SuiteResult& result) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"trial", r.trial},
                    {"seed", r.seed},
                    {"d", r.d},
                    {"n", r.n},
                    {"density", round6(r.density)},
                    {"mechanism", r.mechanism},
                    {"noise", r.noise},
                    {"method", r.method},
                    {"a_top", opt(r.a_top)},
                    {"layers", opt(r.layers)},
                    {"f1", opt(r.f1)},
                    {"precision", opt(r.precision)},
                    {"recall", opt(r.recall)},
                    {"tests", r.tests},
                    {"max_z", r.max_z},
                    {"wall_ms", r.wall_ms},
                    {"error", r.error}});
  }
  json agg = json::object();
  for (const auto& [name, s] : result.aggregates) {
    agg[name] = {{"median", s.median}, {"q1", s.q1}, {"q3", s.q3}, {"count", s.count}};
  }
  return json{{"config", config_json(result.config)}, {"rows", rows}, {"aggregates", agg}}.dump(2) + "\n";
}

SuiteResult suite_from_json(const std::string& text) {
  SuiteResult out;
  try {
    const json j = json::parse(text);
    out.config = config_from(j.at("config"), {});
    for (const auto& r : j.at("rows")) {
      TrialRow row;
      row.trial = r.at("trial").get<int>();
      row.seed = r.at("seed").get<std::uint64_t>();
      row.d = r.at("d").get<int>();
      row.n = r.at("n").get<int>();
      row.density = r.at("density").get<double>();
      row.mechanism = r.at("mechanism").get<std::string>();
      row.noise = r.at("noise").get<std::string>();
      row.method = r.at("method").get<std::string>();
      row.a_top = opt_from<double>(r, "a_top");
      row.layers = opt_from<int>(r, "layers");
      row.f1 = opt_from<double>(r, "f1");
      row.precision = opt_from<double>(r, "precision");
      row.recall = opt_from<double>(r, "recall");
      row.tests = r.at("tests").get<int>();
      row.max_z = r.at("max_z").get<int>();
      row.wall_ms = r.at("wall_ms").get<double>();
      row.error = r.at("error").get<std::string>();
      out.rows.push_back(std::move(row));
    }
    for (const auto& [name, s] : j.at("aggregates").items()) {
      out.aggregates[name] = {s.at("median").get<double>(), s.at("q1").get<double>(), s.at("q3").get<double>(),
                              s.at("count").get<int>()};
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("results JSON: ") + e.what());
  }
  return out;
}

void emit(const SuiteResult& result, Format format, const std::filesystem::path& path) {
  if (result.rows.empty()) throw ParameterError("emit: no results");
  write_text_file(path, format == Format::csv ? to_csv(result) : to_json(result));
}

}  // namespace hts
