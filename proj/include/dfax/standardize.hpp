#pragma once

#include <utility>

#include "dfax/types.hpp"

namespace dfax {

// Column means and stds captured by standardize() so that new instances can
// be mapped into the same units and datasets can be round-tripped back.
struct StandardizationParams {
  Vector means;
  Vector stds;  // population std; 1.0 recorded for constant columns
  std::vector<std::uint8_t> constant_column;
};

// Column-wise z-scoring with the population std (divide by n). Constant
// columns become all zeros and are flagged instead of raising.
std::pair<Dataset, StandardizationParams> standardize(const Matrix& raw,
                                                      std::vector<std::string> feature_names = {});

// Maps a single raw instance into the standardized units of `params`.
Vector standardize_row(const Vector& raw, const StandardizationParams& params);

// Inverse transform; constant columns are restored to their original value.
Matrix unstandardize(const Matrix& standardized, const StandardizationParams& params);

}  // namespace dfax
