#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dfax/errors.hpp"

namespace dfax {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// A numeric dataset: n instances by d named features. All core types are
// immutable after construction and safe to share across threads.
struct Dataset {
  Matrix rows;                                 // n x d
  std::vector<std::string> feature_names;     // d unique names
  std::vector<std::uint8_t> constant_column;  // d flags set by standardize()
  bool standardized = false;

  Dataset() = default;
  Dataset(Matrix rows_, std::vector<std::string> names, bool standardized_,
          std::vector<std::uint8_t> constant_flags = {});

  Index n() const { return rows.rows(); }
  Index d() const { return rows.cols(); }

  static std::vector<std::string> default_names(Index d);
};

// Dense class identifiers in {0, .., num_classes-1}. Holds either classifier
// predictions or ground-truth labels; both travel through the same code.
struct LabelVector {
  std::vector<int> labels;
  int num_classes = 0;

  LabelVector() = default;
  LabelVector(std::vector<int> labels_, int num_classes_);

  Index n() const { return static_cast<Index>(labels.size()); }
};

// The instance whose prediction is being explained, in the same
// (standardized) units as the dataset it is explained against.
struct TargetInstance {
  Vector values;
  int predicted_class = 0;
};

// Per-feature influence scores for one target instance.
struct AttributionVector {
  Vector scores;
  std::string method_tag;
  std::string target_ref;

  AttributionVector() = default;
  AttributionVector(Vector scores_, std::string method_tag_, std::string target_ref_);
};

// Feature indices ordered most important first.
struct AttributionRanking {
  std::vector<Index> order;

  AttributionRanking() = default;
  explicit AttributionRanking(std::vector<Index> order_);
};

namespace detail {
void require_finite(const Eigen::Ref<const Matrix>& m, const char* what);
}

}  // namespace dfax
