#include <gtest/gtest.h>

#include <random>

#include "hts/error.hpp"
#include "hts/stats.hpp"

namespace hts {
namespace {

Eigen::VectorXd normal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = z(rng);
  return v;
}

Eigen::VectorXd uniform(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = u(rng);
  return v;
}

TestConfig config(std::uint64_t seed) {
  TestConfig c;
  c.seed = seed;
  return c;
}

TEST(Ols, ExactLinearFit) {
  std::mt19937_64 rng(1);
  const Eigen::VectorXd x = normal(100, rng);
  const auto r = ols_residuals(2.0 * x, x);
  EXPECT_LT(r.residual.cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_FALSE(r.rank_deficient);
}

TEST(Ols, UnrelatedTargetIsKept) {
  std::mt19937_64 rng(2);
  const Eigen::VectorXd x = normal(1000, rng);
  const Eigen::VectorXd y = normal(1000, rng);
  const auto r = ols_residuals(y, x);
  const Eigen::ArrayXd yc = y.array() - y.mean();
  const double corr = (r.residual.array() * yc).sum() / std::sqrt(r.residual.squaredNorm() * yc.square().sum());
  EXPECT_GT(corr, 0.95);
}

TEST(Ols, EmptyDesignCenters) {
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 6;
  const auto r = ols_residuals(y, Eigen::MatrixXd(4, 0));
  EXPECT_NEAR(r.residual[0], -2.0, 1e-12);
  EXPECT_NEAR(r.residual[3], 3.0, 1e-12);
}

TEST(Ols, CollinearDesignUsesPseudoInverse) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd x(50, 2);
  x.col(0) = normal(50, rng);
  x.col(1) = 2.0 * x.col(0);
  const auto r = ols_residuals(Eigen::VectorXd(3.0 * x.col(0)), x);
  EXPECT_TRUE(r.rank_deficient);
  EXPECT_LT(r.residual.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Krr, ZeroTargetGivesZeroResidual) {
  std::mt19937_64 rng(5);
  const Eigen::VectorXd x = normal(100, rng);
  const auto r = krr_residuals(Eigen::VectorXd::Zero(100), x, default_layer_kernel());
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Krr, InteractionNeedsBothParents) {
  std::mt19937_64 rng(6);
  const int n = 500;
  const Eigen::VectorXd x1 = uniform(n, rng);
  const Eigen::VectorXd x2 = uniform(n, rng);
  const Eigen::VectorXd x3 = (x1.array() * x2.array()).matrix() + 0.05 * uniform(n, rng);
  const auto one = krr_residuals(x3, x1, default_pairwise_kernel());
  EXPECT_FALSE(marginal_independent(x1, one, config(2)).independent);
  Eigen::MatrixXd both(n, 2);
  both << x1, x2;
  const auto two = krr_residuals(x3, both, default_pairwise_kernel());
  EXPECT_TRUE(marginal_independent(x1, two, config(3)).independent);
}

TEST(Krr, RejectsBadInput) {
  Eigen::VectorXd y = Eigen::VectorXd::Ones(20);
  EXPECT_THROW(krr_residuals(y, Eigen::MatrixXd(20, 0), default_layer_kernel()), ParameterError);
  EXPECT_THROW(krr_residuals(y, Eigen::MatrixXd::Ones(20, 1), KernelSpec::rbf(0.1, 0.0)), ParameterError);
}

TEST(DistanceCorrelation, Bounds) {
  std::mt19937_64 rng(7);
  const Eigen::VectorXd x = normal(200, rng);
  EXPECT_NEAR(distance_correlation(x, x), 1.0, 1e-12);
  EXPECT_NEAR(distance_correlation(x, -3.0 * x), 1.0, 1e-12);
  const double v = distance_correlation(x, normal(200, rng));
  EXPECT_GE(v, 0.0);
  EXPECT_LT(v, 0.3);
}

TEST(Marginal, IdentityIsDependent) {
  std::mt19937_64 rng(8);
  const Eigen::VectorXd x = normal(100, rng);
  EXPECT_FALSE(marginal_independent(x, x, config(0)).independent);
}

TEST(Marginal, DetectsUncorrelatedDependence) {
  std::mt19937_64 rng(9);
  const Eigen::VectorXd x = normal(500, rng);
  const Eigen::VectorXd y = x.array().square();
  EXPECT_FALSE(marginal_independent(x, y, config(0)).independent);
}

TEST(Marginal, PermutationNullAgrees) {
  std::mt19937_64 rng(10);
  const Eigen::VectorXd x = normal(200, rng);
  const Eigen::VectorXd y = normal(200, rng);
  TestConfig c = config(4);
  c.method = NullMethod::permutation;
  const auto p = marginal_independent(x, y, c);
  const auto a = marginal_independent(x, y, config(4));
  EXPECT_NEAR(p.p_value, a.p_value, 0.15);
  EXPECT_DOUBLE_EQ(p.statistic, a.statistic);
  const Eigen::VectorXd dep = x + 0.5 * y;
  EXPECT_FALSE(marginal_independent(x, dep, c).independent);
}

TEST(Marginal, RejectsDegenerateInput) {
  const Eigen::VectorXd flat = Eigen::VectorXd::Ones(50);
  std::mt19937_64 rng(11);
  EXPECT_THROW(marginal_independent(flat, normal(50, rng), config(0)), DegenerateDataError);
  EXPECT_THROW(marginal_independent(normal(10, rng), normal(10, rng), config(0)), ParameterError);
  TestConfig bad;
  bad.alpha = 1.5;
  EXPECT_THROW(marginal_independent(normal(50, rng), normal(50, rng), bad), ParameterError);
}

TEST(Conditional, ChainIsScreenedOff) {
  std::mt19937_64 rng(12);
  const int n = 1000;
  const Eigen::VectorXd a = uniform(n, rng);
  const Eigen::VectorXd b = a + 0.5 * uniform(n, rng);
  const Eigen::VectorXd c = b + 0.5 * uniform(n, rng);
  EXPECT_FALSE(conditional_independent(a, c, Eigen::MatrixXd(n, 0), config(1)).independent);
  EXPECT_TRUE(conditional_independent(a, c, b, config(2)).independent);
}

TEST(Conditional, ColliderIsOpened) {
  std::mt19937_64 rng(13);
  const int n = 600;
  const Eigen::VectorXd a = uniform(n, rng);
  const Eigen::VectorXd b = uniform(n, rng);
  const Eigen::VectorXd c = a + b + 0.2 * uniform(n, rng);
  EXPECT_TRUE(conditional_independent(a, b, Eigen::MatrixXd(n, 0), config(3)).independent);
  EXPECT_FALSE(conditional_independent(a, b, c, config(4)).independent);
}

}  // namespace
}  // namespace hts
