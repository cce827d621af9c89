#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hts/stats.hpp"
#include "hts/synth.hpp"

namespace hts {

/// truth: the true hierarchical order; random: a uniformly random permutation;
/// nhts_linear: NHTS admitting one vertex per Stage-4 round.
enum class SortMethod { lhts, nhts, truth, random, nhts_linear };
enum class PruneMethod { none, ed_linear, ed_hierarchical };

struct MethodSpec {
  SortMethod sort = SortMethod::lhts;
  PruneMethod prune = PruneMethod::none;

  /// "lhts", "nhts+ed_linear", "truth+ed_hierarchical", ...
  static MethodSpec parse(const std::string& text);
  std::string name() const;
};

struct TrialConfig {
  int d = 10;
  int n = 1000;
  double density = 1.0;  // expected edges = density * d
  Mechanism mechanism = Mechanism::linear;
  Noise noise = Noise::uniform;
  MethodSpec method;
  int trials = 20;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  NullMethod test_method = NullMethod::asymptotic;
  int permutations = 200;
  std::optional<KernelSpec> pairwise_kernel;
  std::optional<KernelSpec> layer_kernel;
  bool oracle = false;         // graph-truth verdicts, no data
  bool confirm_edges = false;  // ED re-tests discovered edges given the other discovered parents
  bool record_timing = true;   // false writes wall_ms = 0 so reruns are byte-identical

  void validate() const;
  bool nonstandard_density() const;
  TestConfig test_config(std::uint64_t seed) const;
};

/// Overrides the fields present in `text` (a JSON object); unknown keys are rejected.
TrialConfig trial_config_from_json(const std::string& text, TrialConfig base = {});
std::string to_json(const TrialConfig& cfg);

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  int d = 0;
  int n = 0;
  double density = 0.0;
  std::string mechanism;
  std::string noise;
  std::string method;
  std::optional<double> a_top;
  std::optional<int> layers;
  std::optional<double> f1;
  std::optional<double> precision;
  std::optional<double> recall;
  int tests = 0;
  int max_z = 0;
  double wall_ms = 0.0;
  std::string error;
};

struct Summary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  int count = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct SuiteResult {
  TrialConfig config;
  std::vector<TrialRow> rows;
  std::map<std::string, Summary> aggregates;
};

enum class Format { csv, json };
Format parse_format(const std::string& s);

inline constexpr const char* kCsvHeader =
    "trial,seed,d,n,density,mechanism,noise,method,a_top,layers,f1,precision,recall,tests,max_z,wall_ms,error";

/// Floats in rows are rounded to 6 decimals when the row is built.
TrialRow run_trial(const TrialConfig& cfg, int trial);
/// Runs the trials on up to thread_limit() threads; rows come back in trial order.
SuiteResult run_suite(const TrialConfig& cfg);

/// Median and quartiles (linear interpolation) of every numeric column over error-free rows.
std::map<std::string, Summary> aggregate(const std::vector<TrialRow>& rows);
/// Linear-interpolation quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

std::string to_csv(const SuiteResult& result);
std::string to_json(const SuiteResult& result);
SuiteResult suite_from_json(const std::string& text);
void emit(const SuiteResult& result, Format format, const std::filesystem::path& path);

/// Hardware concurrency, capped by the CAUSAL_HTS_THREADS environment variable.
int thread_limit();

}  // namespace hts
