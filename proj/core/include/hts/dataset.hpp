#pragma once

#include <Eigen/Core>

namespace hts {

/// n x d sample matrix; column k holds the observations of vertex k.
class Dataset {
 public:
  Dataset() = default;
  /// Throws DegenerateDataError for fewer than two rows or non-finite entries.
  explicit Dataset(Eigen::MatrixXd values);

  int rows() const { return static_cast<int>(values_.rows()); }
  int cols() const { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd column(int k) const { return values_.col(k); }

 private:
  Eigen::MatrixXd values_;
};

/// Column-wise (x - mean) / sd with the n-1 sample standard deviation.
/// Throws DegenerateDataError on a zero-variance column.
Dataset standardize(const Dataset& ds);

/// In-place standardization of a single column.
void standardize_column(Eigen::Ref<Eigen::VectorXd> column);

}  // namespace hts
