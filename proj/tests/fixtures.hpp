#pragma once

#include <random>

#include "dfax/model.hpp"
#include "dfax/standardize.hpp"
#include "dfax/types.hpp"

namespace fixtures {

using dfax::Index;
using dfax::Matrix;
using dfax::Vector;

inline Matrix random_matrix(Index n, Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) out(i, j) = normal(rng);
  return out;
}

// Class = sign of feature 0; all other features are class-independent noise.
struct SignDataset {
  dfax::Dataset data;
  dfax::LabelVector labels;
  Matrix targets;             // extra draws from the same distribution
  std::vector<int> target_classes;
};

inline SignDataset make_sign_dataset(Index n, Index d, Index n_targets, std::uint64_t seed) {
  const Matrix raw = random_matrix(n + n_targets, d, seed);
  std::vector<int> all_labels(static_cast<std::size_t>(n + n_targets));
  for (Index i = 0; i < n + n_targets; ++i)
    all_labels[static_cast<std::size_t>(i)] = raw(i, 0) > 0.0 ? 1 : 0;

  SignDataset out;
  auto [data, params] = dfax::standardize(raw.topRows(n));
  out.data = std::move(data);
  out.labels = dfax::LabelVector(
      std::vector<int>(all_labels.begin(), all_labels.begin() + n), 2);
  out.targets.resize(n_targets, d);
  for (Index i = 0; i < n_targets; ++i)
    out.targets.row(i) =
        dfax::standardize_row(raw.row(n + i).transpose(), params).transpose();
  out.target_classes.assign(all_labels.begin() + n, all_labels.end());
  return out;
}

// Model that always returns the same probability vector.
inline dfax::model::ModelHandle constant_model(const Vector& probabilities, Index d) {
  return dfax::model::ModelHandle::stub(
      static_cast<int>(probabilities.size()), d,
      [probabilities](const Vector&) { return probabilities; });
}

}  // namespace fixtures
