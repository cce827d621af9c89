#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace hts {

enum class NullMethod { asymptotic, permutation };

struct TestConfig {
  double alpha = 0.05;
  NullMethod method = NullMethod::asymptotic;
  int permutations = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool independent = true;  // p_value > alpha
};

TestResult make_result(double statistic, double p_value, double alpha);

struct KernelSpec {
  enum class Kind { rbf, polynomial };

  Kind kind = Kind::rbf;
  double gamma = 0.01;  // rbf: exp(-gamma * |a - b|^2)
  int degree = 3;       // polynomial: (scale * <a, b> + coef0)^degree
  double coef0 = 1.0;
  double scale = 0.0;   // <= 0 selects 1 / (number of covariates)
  double ridge = 0.1;

  static KernelSpec rbf(double gamma, double ridge);
  static KernelSpec polynomial(int degree, double coef0, double ridge, double scale = 0.0);

  void validate() const;
};

/// Defaults used by the nonlinear sort: cubic polynomial (coef0 1, ridge 1) for
/// pairwise parent checks and RBF (gamma 0.01, ridge 0.1) for layer assignment.
KernelSpec default_pairwise_kernel();
KernelSpec default_layer_kernel();

struct OlsResult {
  Eigen::VectorXd residual;
  int rank = 0;
  bool rank_deficient = false;  // solved with the minimum-norm pseudo-inverse
};

/// Least-squares residual of y on the columns of x (x may have zero columns).
OlsResult ols_residuals(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, bool fit_intercept = true);

struct KrrResult {
  Eigen::VectorXd residual;
  double ridge_used = 0.0;
};

/// In-sample kernel ridge residual y - K (K + ridge I)^{-1} y. On a failed
/// factorization the ridge grows x10 up to three times before NumericalError.
KrrResult krr_fit_residuals(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const KernelSpec& k);
Eigen::VectorXd krr_residuals(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const KernelSpec& k);

/// Gram matrix for the given kernel over the rows of x.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& x, const KernelSpec& k);

/// Sample distance correlation in [0, 1].
double distance_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Distance-covariance independence test. The statistic is the distance
/// correlation; the p-value comes from a moment-matched gamma null on n*dCov^2
/// or from shuffling y.
TestResult marginal_independent(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const TestConfig& cfg);

/// Kernel conditional independence test of x and y given the columns of z
/// (Gaussian kernels, median-heuristic bandwidths, gamma-approximated null).
/// An empty z delegates to marginal_independent.
TestResult conditional_independent(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& z,
                                   const TestConfig& cfg);

}  // namespace hts
