#include "hts/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "hts/error.hpp"

namespace hts {

Dataset::Dataset(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 2) throw DegenerateDataError("dataset needs at least two rows");
  if (!values_.allFinite()) throw DegenerateDataError("dataset contains non-finite values");
}

void standardize_column(Eigen::Ref<Eigen::VectorXd> column) {
  const auto n = column.size();
  if (n < 2) throw DegenerateDataError("cannot standardize fewer than two values");
  const double mean = column.mean();
  column.array() -= mean;
  const double sd = std::sqrt(column.squaredNorm() / static_cast<double>(n - 1));
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) throw DegenerateDataError("zero-variance column");
  column /= sd;
  // second pass removes the rounding residue of the first centering
  column.array() -= column.mean();
}

Dataset standardize(const Dataset& ds) {
  Eigen::MatrixXd out = ds.values();
  for (Eigen::Index k = 0; k < out.cols(); ++k) standardize_column(out.col(k));
  return Dataset(std::move(out));
}

}  // namespace hts
