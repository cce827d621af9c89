#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "hts/error.hpp"
#include "hts/stats.hpp"

namespace hts {

KernelSpec KernelSpec::rbf(double gamma, double ridge) {
  KernelSpec k;
  k.kind = Kind::rbf;
  k.gamma = gamma;
  k.ridge = ridge;
  return k;
}

KernelSpec KernelSpec::polynomial(int degree, double coef0, double ridge, double scale) {
  KernelSpec k;
  k.kind = Kind::polynomial;
  k.degree = degree;
  k.coef0 = coef0;
  k.ridge = ridge;
  k.scale = scale;
  return k;
}

void KernelSpec::validate() const {
  if (!(ridge > 0.0)) throw ParameterError("kernel ridge must be > 0");
  if (kind == Kind::rbf && !(gamma > 0.0)) throw ParameterError("rbf gamma must be > 0");
  if (kind == Kind::polynomial && degree < 1) throw ParameterError("polynomial degree must be >= 1");
}

KernelSpec default_pairwise_kernel() { return KernelSpec::polynomial(3, 1.0, 1.0); }
KernelSpec default_layer_kernel() { return KernelSpec::rbf(0.01, 0.1); }

OlsResult ols_residuals(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, bool fit_intercept) {
  const auto n = y.size();
  if (x.rows() != n) throw ParameterError("ols_residuals: row count mismatch");
  if (n <= x.cols() + (fit_intercept ? 1 : 0)) throw ParameterError("ols_residuals: need n > |X| + 1");

  Eigen::VectorXd yc = y;
  Eigen::MatrixXd xc = x;
  if (fit_intercept) {
    yc.array() -= yc.mean();
    if (xc.cols() > 0) xc.rowwise() -= xc.colwise().mean();
  }
  OlsResult out;
  if (xc.cols() == 0) {
    out.residual = std::move(yc);
    return out;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xc);
  out.rank = static_cast<int>(qr.rank());
  Eigen::VectorXd beta;
  if (out.rank < xc.cols()) {
    out.rank_deficient = true;
    beta = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(xc).solve(yc);
  } else {
    beta = qr.solve(yc);
  }
  out.residual = yc - xc * beta;
  return out;
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& x, const KernelSpec& k) {
  const auto n = x.rows();
  if (k.kind == KernelSpec::Kind::polynomial) {
    const double scale = k.scale > 0.0 ? k.scale : 1.0 / static_cast<double>(std::max<Eigen::Index>(1, x.cols()));
    Eigen::MatrixXd gram = x * x.transpose();
    return (scale * gram.array() + k.coef0).pow(static_cast<double>(k.degree)).matrix();
  }
  const Eigen::VectorXd sq = x.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * (x * x.transpose());
  d2.colwise() += sq;
  d2.rowwise() += sq.transpose();
  Eigen::MatrixXd out(n, n);
  out = (-k.gamma * d2.array().max(0.0)).exp().matrix();
  return out;
}

KrrResult krr_fit_residuals(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const KernelSpec& k) {
  k.validate();
  if (x.cols() < 1) throw ParameterError("krr_residuals: need at least one covariate");
  if (x.rows() != y.size()) throw ParameterError("krr_residuals: row count mismatch");
  if (y.size() < 10) throw ParameterError("krr_residuals: need n >= 10");

  const Eigen::MatrixXd gram = kernel_matrix(x, k);
  double ridge = k.ridge;
  for (int attempt = 0; attempt <= 3; ++attempt, ridge *= 10.0) {
    Eigen::MatrixXd system = gram;
    system.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() != Eigen::Success) continue;
    // y - K (K + rI)^{-1} y == r (K + rI)^{-1} y
    Eigen::VectorXd residual = ridge * llt.solve(y);
    if (!residual.allFinite()) continue;
    return {std::move(residual), ridge};
  }
  throw NumericalError("krr_residuals: kernel system stayed ill-conditioned after ridge escalation");
}

Eigen::VectorXd krr_residuals(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const KernelSpec& k) {
  return krr_fit_residuals(y, x, k).residual;
}

}  // namespace hts
