#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hts/error.hpp"
#include "hts/stats.hpp"
#include "hts/synth.hpp"

namespace hts {
namespace {

ScmConfig config(Mechanism m, Noise z, std::uint64_t seed, bool standardize = false) {
  ScmConfig c;
  c.mechanism = m;
  c.noise = z;
  c.seed = seed;
  c.standardize = standardize;
  return c;
}

TEST(Linear, RootEqualsNoise) {
  const Dag g = testing::chain(3);
  const auto sim = simulate(g, 200, config(Mechanism::linear, Noise::laplace, 3));
  EXPECT_EQ(sim.data.column(0), Eigen::VectorXd(sim.noise.col(0)));
}

TEST(Linear, ChildFollowsStructuralEquation) {
  const Dag g = testing::chain(2);
  const auto sim = simulate(g, 300, config(Mechanism::linear, Noise::uniform, 5));
  const Eigen::VectorXd rest = sim.data.column(1) - sim.weights(0, 1) * sim.data.column(0);
  EXPECT_LT((rest - sim.noise.col(1)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Linear, WeightsWithinRange) {
  const Dag g = erdos_renyi_dag(8, 12.0, 2);
  const auto sim = simulate(g, 50, config(Mechanism::linear, Noise::gaussian, 1));
  for (const auto& [p, c] : g.edges()) {
    const double w = std::abs(sim.weights(p, c));
    EXPECT_GE(w, 0.5);
    EXPECT_LE(w, 1.5);
  }
}

TEST(Noise, UnitVariance) {
  for (Noise z : {Noise::gaussian, Noise::laplace, Noise::uniform}) {
    const auto sim = simulate(Dag(1), 20000, config(Mechanism::linear, z, 8));
    const Eigen::VectorXd e = sim.noise.col(0);
    const double var = (e.array() - e.mean()).square().sum() / (e.size() - 1);
    EXPECT_NEAR(var, 1.0, 0.05) << to_string(z);
  }
}

TEST(Quadratic, ColumnsAreStandardized) {
  const Dag g = erdos_renyi_dag(6, 6.0, 4);
  const Dataset ds = sample_quadratic(g, 500, config(Mechanism::quadratic, Noise::uniform, 2));
  for (int k = 0; k < ds.cols(); ++k) {
    const Eigen::VectorXd c = ds.column(k);
    EXPECT_NEAR(c.mean(), 0.0, 1e-10);
    EXPECT_NEAR(std::sqrt((c.array() - c.mean()).square().sum() / (c.size() - 1)), 1.0, 1e-10);
  }
}

TEST(Quadratic, SingleParentChildIsAffineInParentSquaredAndNoise) {
  const Dag g = testing::chain(2);
  const auto sim = simulate(g, 400, config(Mechanism::quadratic, Noise::gaussian, 6));
  Eigen::MatrixXd design(400, 2);
  design.col(0) = sim.data.column(0).array().square();
  design.col(1) = sim.noise.col(1);
  EXPECT_LT(ols_residuals(sim.data.column(1), design).residual.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Simulate, DeterministicPerSeed) {
  const Dag g = erdos_renyi_dag(7, 7.0, 3);
  const auto c = config(Mechanism::quadratic, Noise::laplace, 12, true);
  EXPECT_EQ(simulate(g, 100, c).data.values(), simulate(g, 100, c).data.values());
  auto other = c;
  other.seed = 13;
  EXPECT_NE(simulate(g, 100, c).data.values(), simulate(g, 100, other).data.values());
}

TEST(Simulate, RejectsBadConfig) {
  auto c = config(Mechanism::linear, Noise::uniform, 0);
  c.coeff_low = 2.0;
  EXPECT_THROW(simulate(Dag(2), 10, c), ParameterError);
  EXPECT_THROW(simulate(Dag(2), 1, config(Mechanism::linear, Noise::uniform, 0)), ParameterError);
  EXPECT_THROW(parse_noise("cauchy"), ParameterError);
  EXPECT_THROW(parse_mechanism("cubic"), ParameterError);
}

TEST(Standardize, Examples) {
  Eigen::MatrixXd m(3, 2);
  m << 1, 5, 2, 5, 3, 5.5;
  const Dataset s = standardize(Dataset(m));
  EXPECT_NEAR(s.values()(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(s.values()(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(s.values()(2, 0), 1.0, 1e-15);
  EXPECT_NEAR(s.column(1).mean(), 0.0, 1e-12);
  const Dataset twice = standardize(s);
  EXPECT_LT((twice.values() - s.values()).cwiseAbs().maxCoeff(), 1e-12);

  Eigen::MatrixXd flat(4, 1);
  flat << 2, 2, 2, 2;
  EXPECT_THROW(standardize(Dataset(flat)), DegenerateDataError);
}

}  // namespace
}  // namespace hts
