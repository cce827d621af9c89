#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <boost/math/special_functions/gamma.hpp>

#include "hts/dataset.hpp"
#include "hts/error.hpp"
#include "hts/stats.hpp"

namespace hts {

void TestConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (method == NullMethod::permutation && permutations < 50) {
    throw ParameterError("permutation tests need at least 50 permutations");
  }
}

TestResult make_result(double statistic, double p_value, double alpha) {
  p_value = std::clamp(p_value, 0.0, 1.0);
  return {statistic, p_value, p_value > alpha};
}

namespace {

constexpr double kCiRegularization = 1e-3;

// Upper tail of a gamma law matched to the null mean and variance.
double gamma_upper_tail(double statistic, double mean, double variance) {
  if (!(mean > 0.0) || !(variance > 0.0)) return 1.0;
  const double shape = mean * mean / variance;
  const double scale = variance / mean;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(shape, statistic / scale);
}

// Row sums s_k = sum_l |v_k - v_l| in O(n log n).
Eigen::VectorXd distance_row_sums(const Eigen::VectorXd& v) {
  const auto n = v.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  const double total = v.sum();
  Eigen::VectorXd sums(n);
  double below = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto k = order[static_cast<std::size_t>(r)];
    const double x = v[k];
    const double above = total - below - x;
    sums[k] = x * static_cast<double>(r) - below + above - x * static_cast<double>(n - r - 1);
    below += x;
  }
  return sums;
}

// sum_{k,l} |x_k - x_l| |y_k - y_l|
double cross_distance_sum(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const auto n = x.size();
  double acc = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const auto m = n - k - 1;
    acc += ((x.tail(m).array() - x[k]).abs() * (y.tail(m).array() - y[k]).abs()).sum();
  }
  return 2.0 * acc;
}

// Squared distance covariance of v with itself; sum_{k,l} (v_k - v_l)^2 has a closed form.
double self_dcov2(const Eigen::VectorXd& v, const Eigen::VectorXd& row_sums) {
  const double n = static_cast<double>(v.size());
  const double centered_ss = (v.array() - v.mean()).square().sum();
  const double s1 = 2.0 * n * centered_ss / (n * n);
  const double grand = row_sums.sum() / (n * n);
  const double s3 = row_sums.squaredNorm() / (n * n * n);
  return s1 + grand * grand - 2.0 * s3;
}

struct DcovParts {
  Eigen::VectorXd row_x, row_y;
  double grand_x = 0.0, grand_y = 0.0;
  double self_x = 0.0, self_y = 0.0;
};

double dcov2(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& row_x,
             const Eigen::VectorXd& row_y, double grand_x, double grand_y) {
  const double n = static_cast<double>(x.size());
  const double s1 = cross_distance_sum(x, y) / (n * n);
  const double s3 = row_x.dot(row_y) / (n * n * n);
  return s1 + grand_x * grand_y - 2.0 * s3;
}

DcovParts dcov_parts(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  DcovParts p;
  const double n = static_cast<double>(x.size());
  p.row_x = distance_row_sums(x);
  p.row_y = distance_row_sums(y);
  p.grand_x = p.row_x.sum() / (n * n);
  p.grand_y = p.row_y.sum() / (n * n);
  p.self_x = self_dcov2(x, p.row_x);
  p.self_y = self_dcov2(y, p.row_y);
  return p;
}

void check_pair(const Eigen::VectorXd& x, const Eigen::VectorXd& y, Eigen::Index min_n) {
  if (x.size() != y.size()) throw ParameterError("independence test: columns differ in length");
  if (x.size() < min_n) throw ParameterError("independence test: too few samples");
  if (!x.allFinite() || !y.allFinite()) throw DegenerateDataError("independence test: non-finite values");
}

Eigen::VectorXd standardized(const Eigen::VectorXd& v) {
  Eigen::VectorXd out = v;
  standardize_column(out);
  return out;
}

Eigen::MatrixXd standardized_columns(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  for (Eigen::Index c = 0; c < out.cols(); ++c) standardize_column(out.col(c));
  return out;
}

double median_pairwise_distance(const Eigen::MatrixXd& pts) {
  const auto n = pts.rows();
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) dist.push_back((pts.row(a) - pts.row(b)).norm());
  auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  return *mid;
}

// Centered Gaussian Gram matrix with median-heuristic bandwidth.
Eigen::MatrixXd centered_gaussian_gram(const Eigen::MatrixXd& pts) {
  const double sigma = median_pairwise_distance(pts);
  if (!(sigma > 0.0)) throw DegenerateDataError("kernel CI test: all points coincide");
  Eigen::MatrixXd k = kernel_matrix(pts, KernelSpec::rbf(0.5 / (sigma * sigma), 1.0));
  const Eigen::VectorXd row_mean = k.rowwise().mean();
  const double grand = row_mean.mean();
  k.colwise() -= row_mean;
  k.rowwise() -= row_mean.transpose();
  k.array() += grand;
  return k;
}

}  // namespace

double distance_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_pair(x, y, 2);
  const auto p = dcov_parts(x, y);
  if (!(p.self_x > 0.0) || !(p.self_y > 0.0)) throw DegenerateDataError("distance correlation: constant column");
  const double v = dcov2(x, y, p.row_x, p.row_y, p.grand_x, p.grand_y);
  return std::sqrt(std::max(0.0, v) / std::sqrt(p.self_x * p.self_y));
}

TestResult marginal_independent(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const TestConfig& cfg) {
  cfg.validate();
  check_pair(x, y, 20);
  const auto p = dcov_parts(x, y);
  const double scale_x = std::sqrt(p.self_x), scale_y = std::sqrt(p.self_y);
  if (!(scale_x > 1e-12 * (1.0 + x.cwiseAbs().maxCoeff())) || !(scale_y > 1e-12 * (1.0 + y.cwiseAbs().maxCoeff()))) {
    throw DegenerateDataError("independence test: constant column");
  }
  const double n = static_cast<double>(x.size());
  const double v = dcov2(x, y, p.row_x, p.row_y, p.grand_x, p.grand_y);
  const double dcor = std::sqrt(std::max(0.0, v) / (scale_x * scale_y));

  if (cfg.method == NullMethod::asymptotic) {
    const double mean = p.grand_x * p.grand_y;
    const double variance = 2.0 * p.self_x * p.self_y;
    return make_result(dcor, gamma_upper_tail(n * v, mean, variance), cfg.alpha);
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(x.size()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Eigen::VectorXd y_perm(y.size());
  Eigen::VectorXd row_perm(y.size());
  int at_least = 0;
  for (int b = 0; b < cfg.permutations; ++b) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      y_perm[k] = y[perm[static_cast<std::size_t>(k)]];
      row_perm[k] = p.row_y[perm[static_cast<std::size_t>(k)]];
    }
    if (dcov2(x, y_perm, p.row_x, row_perm, p.grand_x, p.grand_y) >= v) ++at_least;
  }
  return make_result(dcor, (1.0 + at_least) / (1.0 + cfg.permutations), cfg.alpha);
}

TestResult conditional_independent(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& z,
                                   const TestConfig& cfg) {
  if (z.cols() == 0) return marginal_independent(x, y, cfg);
  cfg.validate();
  check_pair(x, y, 20);
  if (z.rows() != x.size()) throw ParameterError("conditional test: conditioning set has wrong length");
  const auto n = x.size();

  const Eigen::VectorXd xs = standardized(x);
  const Eigen::VectorXd ys = standardized(y);
  const Eigen::MatrixXd zs = standardized_columns(z);

  Eigen::MatrixXd xz(n, 1 + zs.cols());
  xz.col(0) = xs;
  xz.rightCols(zs.cols()) = 0.5 * zs;

  const Eigen::MatrixXd kx = centered_gaussian_gram(xz);
  const Eigen::MatrixXd ky = centered_gaussian_gram(ys);
  Eigen::MatrixXd kz = centered_gaussian_gram(zs);

  // R = eps (Kz + eps I)^{-1} projects out the part of each kernel explained by z.
  kz.diagonal().array() += kCiRegularization;
  Eigen::LLT<Eigen::MatrixXd> llt(kz);
  if (llt.info() != Eigen::Success) throw NumericalError("conditional test: conditioning kernel factorization failed");
  Eigen::MatrixXd r = llt.solve(Eigen::MatrixXd::Identity(n, n));
  r *= kCiRegularization;
  r = 0.5 * (r + r.transpose()).eval();

  const Eigen::MatrixXd kx_r = r * kx * r;
  const Eigen::MatrixXd ky_r = r * ky * r;
  const double statistic = (kx_r.array() * ky_r.array()).sum();

  if (cfg.method == NullMethod::asymptotic) {
    const double mean = (kx_r.diagonal().array() * ky_r.diagonal().array()).sum();
    const double variance = 2.0 * (kx_r.array() * ky_r.array()).square().sum();
    return make_result(statistic, gamma_upper_tail(statistic, mean, variance), cfg.alpha);
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  int at_least = 0;
  for (int b = 0; b < cfg.permutations; ++b) {
    std::shuffle(perm.begin(), perm.end(), rng);
    double s = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto pc = perm[static_cast<std::size_t>(c)];
      for (Eigen::Index a = 0; a < n; ++a) s += kx_r(a, c) * ky_r(perm[static_cast<std::size_t>(a)], pc);
    }
    if (s >= statistic) ++at_least;
  }
  return make_result(statistic, (1.0 + at_least) / (1.0 + cfg.permutations), cfg.alpha);
}

}  // namespace hts
