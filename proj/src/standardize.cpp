#include "dfax/standardize.hpp"

#include <cmath>

namespace dfax {

std::pair<Dataset, StandardizationParams> standardize(const Matrix& raw,
                                                      std::vector<std::string> feature_names) {
  const Index n = raw.rows(), d = raw.cols();
  if (n < 2) throw InvalidData("standardize needs at least 2 rows");
  detail::require_finite(raw, "raw matrix");

  StandardizationParams params;
  params.means = raw.colwise().mean();
  params.stds.resize(d);
  params.constant_column.assign(static_cast<std::size_t>(d), 0);

  Matrix out(n, d);
  for (Index j = 0; j < d; ++j) {
    const double mean = params.means[j];
    const double var = (raw.col(j).array() - mean).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
      params.constant_column[static_cast<std::size_t>(j)] = 1;
      params.stds[j] = 1.0;
      out.col(j).setZero();
    } else {
      params.stds[j] = sd;
      out.col(j) = (raw.col(j).array() - mean) / sd;
    }
  }
  Dataset data(std::move(out), std::move(feature_names), true, params.constant_column);
  return {std::move(data), std::move(params)};
}

Vector standardize_row(const Vector& raw, const StandardizationParams& params) {
  if (raw.size() != params.means.size())
    throw DimensionMismatch("instance width does not match standardization params");
  detail::require_finite(raw, "instance");
  Vector out(raw.size());
  for (Index j = 0; j < raw.size(); ++j) {
    out[j] = params.constant_column[static_cast<std::size_t>(j)]
                 ? 0.0
                 : (raw[j] - params.means[j]) / params.stds[j];
  }
  return out;
}

Matrix unstandardize(const Matrix& standardized, const StandardizationParams& params) {
  if (standardized.cols() != params.means.size())
    throw DimensionMismatch("matrix width does not match standardization params");
  Matrix out(standardized.rows(), standardized.cols());
  for (Index j = 0; j < standardized.cols(); ++j) {
    if (params.constant_column[static_cast<std::size_t>(j)])
      out.col(j).setConstant(params.means[j]);
    else
      out.col(j) = standardized.col(j).array() * params.stds[j] + params.means[j];
  }
  return out;
}

}  // namespace dfax
