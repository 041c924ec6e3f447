#include "dfax/types.hpp"

#include <cmath>
#include <unordered_set>

namespace dfax {

namespace detail {

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite()) throw InvalidData(std::string(what) + " contains non-finite values");
}

}  // namespace detail

std::vector<std::string> Dataset::default_names(Index d) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));
  return names;
}

Dataset::Dataset(Matrix rows_, std::vector<std::string> names, bool standardized_,
                 std::vector<std::uint8_t> constant_flags)
    : rows(std::move(rows_)),
      feature_names(std::move(names)),
      constant_column(std::move(constant_flags)),
      standardized(standardized_) {
  const Index dd = rows.cols();
  if (feature_names.empty()) feature_names = default_names(dd);
  if (static_cast<Index>(feature_names.size()) != dd)
    throw DimensionMismatch("feature name count does not match column count");
  if (constant_column.empty()) constant_column.assign(static_cast<std::size_t>(dd), 0);
  if (static_cast<Index>(constant_column.size()) != dd)
    throw DimensionMismatch("constant-column flag count does not match column count");
  detail::require_finite(rows, "dataset");

  std::unordered_set<std::string> seen;
  for (const auto& name : feature_names)
    if (!seen.insert(name).second) throw InvalidData("duplicate feature name: " + name);

  if (standardized && rows.rows() >= 2) {
    // Columns declared standardized must have mean ~0 and population std ~1,
    // except the flagged constant columns (mapped to all zeros upstream).
    const double n = static_cast<double>(rows.rows());
    for (Index j = 0; j < dd; ++j) {
      if (constant_column[static_cast<std::size_t>(j)]) continue;
      const double mean = rows.col(j).mean();
      const double var = (rows.col(j).array() - mean).square().sum() / n;
      if (std::abs(mean) > 1e-6 || std::abs(std::sqrt(var) - 1.0) > 1e-6)
        throw InvalidData("column " + feature_names[static_cast<std::size_t>(j)] +
                          " is not standardized");
    }
  }
}

LabelVector::LabelVector(std::vector<int> labels_, int num_classes_)
    : labels(std::move(labels_)), num_classes(num_classes_) {
  if (num_classes < 1) throw InvalidParameter("class count must be at least 1");
  for (int y : labels)
    if (y < 0 || y >= num_classes)
      throw InvalidData("label " + std::to_string(y) + " outside [0, " +
                        std::to_string(num_classes) + ")");
}

AttributionVector::AttributionVector(Vector scores_, std::string method_tag_,
                                     std::string target_ref_)
    : scores(std::move(scores_)),
      method_tag(std::move(method_tag_)),
      target_ref(std::move(target_ref_)) {
  if (!scores.allFinite()) throw InvalidData("attribution scores contain non-finite values");
}

AttributionRanking::AttributionRanking(std::vector<Index> order_) : order(std::move(order_)) {
  std::vector<std::uint8_t> seen(order.size(), 0);
  for (Index idx : order) {
    if (idx < 0 || idx >= static_cast<Index>(order.size()) || seen[static_cast<std::size_t>(idx)])
      throw InvalidData("ranking is not a permutation of feature indices");
    seen[static_cast<std::size_t>(idx)] = 1;
  }
}

}  // namespace dfax
