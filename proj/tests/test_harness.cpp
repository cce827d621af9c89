#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "hts/error.hpp"
#include "hts/harness.hpp"

namespace hts {
namespace {

TrialConfig small(const std::string& method) {
  TrialConfig c;
  c.d = 6;
  c.n = 200;
  c.trials = 3;
  c.seed = 5;
  c.method = MethodSpec::parse(method);
  c.record_timing = false;
  return c;
}

TEST(MethodSpecTest, ParseAndName) {
  for (const char* name : {"lhts", "nhts+ed_linear", "truth+ed_hierarchical", "random", "nhts_linear+ed_linear"})
    EXPECT_EQ(MethodSpec::parse(name).name(), name);
  EXPECT_THROW(MethodSpec::parse("pc"), ParameterError);
  EXPECT_THROW(MethodSpec::parse("lhts+cam"), ParameterError);
}

TEST(TrialConfigTest, Validation) {
  TrialConfig c;
  EXPECT_NO_THROW(c.validate());
  c.trials = 0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = {};
  c.density = 10.0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = {};
  c.density = 1.5;
  EXPECT_TRUE(c.nonstandard_density());
  c.density = 3.0;
  EXPECT_FALSE(c.nonstandard_density());
}

TEST(TrialConfigTest, JsonOverridesAndRejectsUnknownKeys) {
  TrialConfig base;
  base.n = 77;
  const auto c = trial_config_from_json(R"({"d": 4, "noise": "laplace", "method": "nhts"})", base);
  EXPECT_EQ(c.d, 4);
  EXPECT_EQ(c.n, 77);
  EXPECT_EQ(c.noise, Noise::laplace);
  EXPECT_EQ(c.method.sort, SortMethod::nhts);
  EXPECT_THROW(trial_config_from_json(R"({"depth": 4})"), ParameterError);
  EXPECT_THROW(trial_config_from_json("[1]"), ParameterError);
}

TEST(Quantile, TypeSeven) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(quantile({7}, 0.25), 7.0);
}

TEST(Suite, OracleModeIsExact) {
  for (const char* method : {"lhts+ed_linear", "nhts+ed_hierarchical", "truth+ed_linear"}) {
    auto c = small(method);
    c.oracle = true;
    c.confirm_edges = true;
    c.d = 8;
    c.density = 2.0;
    c.trials = 5;
    const auto r = run_suite(c);
    for (const auto& row : r.rows) {
      EXPECT_EQ(row.a_top, 1.0) << method;
      EXPECT_EQ(row.f1, 1.0) << method;
      EXPECT_TRUE(row.error.empty());
    }
  }
}

TEST(Suite, SingleTrialAggregatesEqualRow) {
  auto c = small("lhts+ed_linear");
  c.trials = 1;
  const auto r = run_suite(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.aggregates.at("a_top").median, *r.rows[0].a_top);
  EXPECT_EQ(r.aggregates.at("a_top").q1, *r.rows[0].a_top);
  EXPECT_EQ(r.aggregates.at("f1").q3, *r.rows[0].f1);
  EXPECT_EQ(r.aggregates.at("a_top").count, 1);
}

TEST(Suite, RowsFollowSeedSchedule) {
  const auto r = run_suite(small("random"));
  ASSERT_EQ(r.rows.size(), 3u);
  for (int t = 0; t < 3; ++t) {
    EXPECT_EQ(r.rows[static_cast<std::size_t>(t)].trial, t);
    EXPECT_EQ(r.rows[static_cast<std::size_t>(t)].seed, 5u + static_cast<unsigned>(t));
  }
  EXPECT_FALSE(r.rows[0].f1.has_value());
}

TEST(Suite, DeterministicAcrossThreadCounts) {
  const auto c = small("lhts+ed_hierarchical");
  ::setenv("CAUSAL_HTS_THREADS", "1", 1);
  EXPECT_EQ(thread_limit(), 1);
  const std::string one = to_csv(run_suite(c));
  ::setenv("CAUSAL_HTS_THREADS", "3", 1);
  const std::string three = to_csv(run_suite(c));
  ::unsetenv("CAUSAL_HTS_THREADS");
  EXPECT_EQ(one, three);
}

TEST(Suite, AggregatesMatchRecomputation) {
  const auto r = run_suite(small("lhts+ed_linear"));
  std::vector<double> f1;
  for (const auto& row : r.rows) f1.push_back(*row.f1);
  EXPECT_DOUBLE_EQ(r.aggregates.at("f1").median, quantile(f1, 0.5));
  EXPECT_DOUBLE_EQ(r.aggregates.at("f1").q1, quantile(f1, 0.25));
}

TEST(Emit, CsvSchema) {
  const std::string csv = to_csv(run_suite(small("lhts")));
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, kCsvHeader);
  EXPECT_EQ(header, "trial,seed,d,n,density,mechanism,noise,method,a_top,layers,f1,precision,recall,tests,max_z,"
                    "wall_ms,error");
  std::getline(in, row);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 16);
  EXPECT_NE(row.find(",1.000000,"), std::string::npos);
}

TEST(Emit, JsonRoundTripKeepsAggregates) {
  const auto r = run_suite(small("lhts+ed_linear"));
  const auto back = suite_from_json(to_json(r));
  EXPECT_EQ(back.aggregates, r.aggregates);
  EXPECT_EQ(back.rows.size(), r.rows.size());
  EXPECT_EQ(to_csv(back), to_csv(r));
  EXPECT_EQ(back.config.d, r.config.d);
}

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("csv"), Format::csv);
  EXPECT_EQ(parse_format("json"), Format::json);
  EXPECT_THROW(parse_format("xml"), ParameterError);
}

}  // namespace
}  // namespace hts
