#include "cli.hpp"

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hts/ed.hpp"
#include "hts/error.hpp"
#include "hts/harness.hpp"
#include "hts/lhts.hpp"
#include "hts/nhts.hpp"
#include "hts/oracle_suite.hpp"
#include "hts/seed.hpp"
#include "hts/serialize.hpp"
#include "hts/synth.hpp"

namespace hts {

namespace {

struct Options {
  int d = 10;
  int n = 1000;
  double density = 1.0;
  std::string mechanism = "linear";
  std::string noise = "uniform";
  std::string method;
  int trials = 20;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::string out;
  std::string format;
  std::string config;

  std::string data;
  std::string dag;
  std::string order;
  std::string trace;
  std::string ars;
  bool no_timing = false;
  bool oracle = false;
  bool confirm_edges = false;
  int dmax = 6;
  int random_graphs = 200;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--d", o.d, "Number of variables");
  cmd->add_option("--n", o.n, "Number of samples");
  cmd->add_option("--density", o.density, "Expected edges per vertex");
  cmd->add_option("--mechanism", o.mechanism, "linear | quadratic");
  cmd->add_option("--noise", o.noise, "gaussian | laplace | uniform");
  cmd->add_option("--method", o.method, "Sort and/or pruning method, e.g. lhts, nhts+ed_linear");
  cmd->add_option("--trials", o.trials, "Number of trials");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--alpha", o.alpha, "Significance level");
  cmd->add_option("--out", o.out, "Output file (default: standard output)");
  cmd->add_option("--format", o.format, "csv | json");
  cmd->add_option("--config", o.config, "JSON config file; its fields override the flags");
}

TrialConfig resolve(const Options& o, const std::string& default_method) {
  TrialConfig c;
  c.d = o.d;
  c.n = o.n;
  c.density = o.density;
  c.mechanism = parse_mechanism(o.mechanism);
  c.noise = parse_noise(o.noise);
  c.method = MethodSpec::parse(o.method.empty() ? default_method : o.method);
  c.trials = o.trials;
  c.seed = o.seed;
  c.alpha = o.alpha;
  c.record_timing = !o.no_timing;
  c.oracle = o.oracle;
  c.confirm_edges = o.confirm_edges;
  if (!o.config.empty()) {
    std::string text;
    try {
      text = read_text_file(o.config);
    } catch (const IoError& e) {
      throw ParameterError(e.what());
    }
    c = trial_config_from_json(text, c);
  }
  return c;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_text_file(path, content);
  }
}

Format output_format(const Options& o) {
  if (!o.format.empty()) return parse_format(o.format);
  const auto dot = o.out.rfind('.');
  return dot != std::string::npos && o.out.substr(dot) == ".json" ? Format::json : Format::csv;
}

Dataset load_data(const Options& o) {
  if (o.data.empty()) throw ParameterError("--data is required");
  return dataset_from_csv(read_text_file(o.data));
}

int run_generate(const Options& o) {
  const auto c = resolve(o, "lhts");
  c.validate();
  const Dag g = erdos_renyi_dag(c.d, c.density * c.d, derive_seed(c.seed, 1));
  ScmConfig scm;
  scm.mechanism = c.mechanism;
  scm.noise = c.noise;
  scm.seed = derive_seed(c.seed, 2);
  const auto sim = simulate(g, c.n, scm);
  for (const auto& w : sim.warnings) std::cerr << "warning: " << w << '\n';
  write_output(o.out, to_csv(sim.data));
  if (!o.dag.empty()) write_text_file(o.dag, to_json(g));
  return 0;
}

int run_sort(const Options& o) {
  const auto c = resolve(o, "lhts");
  c.validate();
  const Dataset data = load_data(o);
  const TestConfig tests = c.test_config(derive_seed(c.seed, 3));
  if (c.method.sort == SortMethod::lhts) {
    const auto r = lhts(data, tests);
    write_output(o.out, to_json(r.order));
    if (!o.trace.empty()) write_text_file(o.trace, to_json(r.diagnostics));
    if (!o.ars.empty()) write_text_file(o.ars, to_json(r.ars));
    if (r.diagnostics.cycle_repaired) std::cerr << "warning: ancestral relations contained a cycle\n";
  } else if (c.method.sort == SortMethod::nhts || c.method.sort == SortMethod::nhts_linear) {
    const auto r = nhts(data, tests, c.pairwise_kernel.value_or(default_pairwise_kernel()),
                        c.layer_kernel.value_or(default_layer_kernel()),
                        c.method.sort == SortMethod::nhts ? Admission::layer : Admission::single);
    write_output(o.out, to_json(r.order));
    if (!o.trace.empty()) write_text_file(o.trace, to_json(r.trace));
  } else {
    throw ParameterError("sort: --method must be lhts, nhts or nhts_linear");
  }
  return 0;
}

int run_prune(const Options& o) {
  const auto c = resolve(o, "truth+ed_linear");
  c.validate();
  if (o.order.empty()) throw ParameterError("--order is required");
  EdConfig ed;
  ed.ci = c.test_config(derive_seed(c.seed, 4));
  ed.confirm_edges = c.confirm_edges;
  if (!o.dag.empty()) ed.oracle = dag_from_json(read_text_file(o.dag));
  const Dataset data = o.data.empty() && ed.oracle ? Dataset() : load_data(o);
  const auto order = order_from_json(read_text_file(o.order));

  EdResult r;
  if (c.method.prune == PruneMethod::ed_hierarchical) {
    HierarchicalOrder layered;
    if (const auto* h = std::get_if<HierarchicalOrder>(&order)) {
      layered = *h;
    } else {
      std::vector<VertexSet> layers;
      for (Vertex v : std::get<LinearOrder>(order).perm()) layers.push_back({v});
      layered = HierarchicalOrder(std::move(layers));
    }
    r = ed_hierarchical_run(data, layered, ed);
  } else if (c.method.prune == PruneMethod::ed_linear) {
    const auto* h = std::get_if<HierarchicalOrder>(&order);
    const LinearOrder flat = h ? linearize(*h, derive_seed(c.seed, 7)) : std::get<LinearOrder>(order);
    r = ed_linear_run(data, flat, ed);
  } else {
    throw ParameterError("prune: --method must name ed_linear or ed_hierarchical");
  }
  write_output(o.out, to_json(r.parents));
  if (!o.trace.empty()) write_text_file(o.trace, to_json(r));
  return 0;
}

int run_bench(const Options& o) {
  const auto c = resolve(o, "lhts");
  c.validate();
  if (c.nonstandard_density()) std::cerr << "note: density " << c.density << " is outside the standard grid 1-4\n";
  const auto result = run_suite(c);
  const Format format = output_format(o);
  if (o.out.empty()) {
    std::cout << (format == Format::csv ? to_csv(result) : to_json(result));
  } else {
    emit(result, format, o.out);
  }
  int failed = 0;
  for (const auto& row : result.rows) failed += row.error.empty() ? 0 : 1;
  for (const auto& [name, s] : result.aggregates) {
    std::cerr << name << ": median " << s.median << " [" << s.q1 << ", " << s.q3 << "]\n";
  }
  if (failed > 0) std::cerr << failed << " of " << result.rows.size() << " trials failed\n";
  return 0;
}

int run_oracle_check(const Options& o) {
  if (o.dmax < 1 || o.dmax > 7) throw ParameterError("--dmax must lie in 1..7");
  if (o.random_graphs < 0) throw ParameterError("--random must be >= 0");
  bool all = true;
  for (const auto& check : run_oracle_suites(o.dmax, o.random_graphs, o.seed)) {
    std::cout << check.name << ": " << check.graphs - check.failures << "/" << check.graphs << " exact ("
              << check.seconds << " s)\n";
    if (!check.passed()) {
      all = false;
      std::cout << "  first failure: " << check.first_failure << '\n';
    }
  }
  std::cout << (all ? "all exact" : "mismatches found") << '\n';
  return all ? 0 : 2;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Hierarchical topological sorts and edge pruning for causal discovery", "causal-hts"};
  app.require_subcommand(1);
  Options o;

  auto* generate = app.add_subcommand("generate", "Sample a random DAG and a dataset from it");
  add_common(generate, o);
  generate->add_option("--dag", o.dag, "Also write the sampled DAG as JSON");

  auto* sort = app.add_subcommand("sort", "Learn a hierarchical order from a dataset");
  add_common(sort, o);
  sort->add_option("--data", o.data, "Dataset CSV");
  sort->add_option("--trace", o.trace, "Write the test or regression trace as JSON");
  sort->add_option("--ars", o.ars, "Write the ancestral relation table as JSON (lhts)");

  auto* prune = app.add_subcommand("prune", "Recover parent sets from a dataset and an order");
  add_common(prune, o);
  prune->add_option("--data", o.data, "Dataset CSV");
  prune->add_option("--order", o.order, "Order JSON ({\"perm\": ...} or {\"layers\": ...})");
  prune->add_option("--dag", o.dag, "Answer tests by d-separation in this DAG");
  prune->add_option("--trace", o.trace, "Write the test trace as JSON");
  prune->add_flag("--confirm-edges", o.confirm_edges, "Re-test discovered edges given the other discovered parents");

  auto* bench = app.add_subcommand("bench", "Run the generate-sort-prune-score loop over many trials");
  add_common(bench, o);
  bench->add_flag("--no-timing", o.no_timing, "Write wall_ms as 0 so reruns are byte-identical");
  bench->add_flag("--oracle", o.oracle, "Answer every test from the true graph instead of data");
  bench->add_flag("--confirm-edges", o.confirm_edges, "Re-test discovered edges given the other discovered parents");

  auto* oracle = app.add_subcommand("oracle-check", "Run every algorithm with graph-truth verdicts");
  oracle->add_option("--dmax", o.dmax, "Enumerate all DAGs up to this size");
  oracle->add_option("--random", o.random_graphs, "Number of extra random DAGs on 8 vertices");
  oracle->add_option("--seed", o.seed, "Seed for relabelings and random graphs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*generate) return run_generate(o);
    if (*sort) return run_sort(o);
    if (*prune) return run_prune(o);
    if (*bench) return run_bench(o);
    return run_oracle_check(o);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace hts
