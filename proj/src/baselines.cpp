#include "dfax/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "dfax/instrumentation.hpp"
#include "dfax/rng.hpp"

namespace dfax::baselines {

ShapleyWeights ShapleyWeights::for_dim(Index d) {
  if (d < 1) throw InvalidParameter("Shapley weights need d >= 1");
  ShapleyWeights weights;
  weights.by_size.resize(static_cast<std::size_t>(d));
  // M(k) = k! (d-1-k)! / d! computed incrementally to stay exact in double
  // for d <= 15: M(0) = 1/d and M(k+1) = M(k) * (k+1) / (d-1-k).
  weights.by_size[0] = 1.0 / static_cast<double>(d);
  for (Index k = 0; k + 1 < d; ++k)
    weights.by_size[static_cast<std::size_t>(k + 1)] =
        weights.by_size[static_cast<std::size_t>(k)] * static_cast<double>(k + 1) /
        static_cast<double>(d - 1 - k);
  return weights;
}

namespace {

// Columns of `rows` restricted to the subset, in ascending feature order.
Matrix restrict_columns(const Matrix& rows, const std::vector<std::uint8_t>& subset) {
  Index width = 0;
  for (std::uint8_t on : subset) width += on ? 1 : 0;
  Matrix out(rows.rows(), width);
  Index col = 0;
  for (Index j = 0; j < static_cast<Index>(subset.size()); ++j)
    if (subset[static_cast<std::size_t>(j)]) out.col(col++) = rows.col(j);
  return out;
}

Vector restrict_values(const Vector& values, const std::vector<std::uint8_t>& subset) {
  Index width = 0;
  for (std::uint8_t on : subset) width += on ? 1 : 0;
  Vector out(width);
  Index col = 0;
  for (Index j = 0; j < values.size(); ++j)
    if (subset[static_cast<std::size_t>(j)]) out[col++] = values[j];
  return out;
}

std::vector<std::uint8_t> mask_to_subset(std::uint32_t mask, Index d) {
  std::vector<std::uint8_t> subset(static_cast<std::size_t>(d), 0);
  for (Index j = 0; j < d; ++j)
    if (mask & (1u << j)) subset[static_cast<std::size_t>(j)] = 1;
  return subset;
}

}  // namespace

RetrainEvaluator::RetrainEvaluator(model::BuiltinKind kind, const Dataset& data,
                                   const LabelVector& labels, std::uint64_t seed)
    : kind_(kind), data_(data), labels_(labels), seed_(seed) {
  class_frequency_.assign(static_cast<std::size_t>(labels.num_classes), 0.0);
  for (int y : labels.labels) class_frequency_[static_cast<std::size_t>(y)] += 1.0;
  for (double& f : class_frequency_) f /= static_cast<double>(labels.n());
}

double RetrainEvaluator::operator()(const std::vector<std::uint8_t>& subset,
                                    const TargetInstance& target) const {
  const Index width =
      std::accumulate(subset.begin(), subset.end(), Index{0},
                      [](Index acc, std::uint8_t on) { return acc + (on ? 1 : 0); });
  if (width == 0) return class_frequency_[static_cast<std::size_t>(target.predicted_class)];

  Dataset sub(restrict_columns(data_.rows, subset), Dataset::default_names(width),
              /*standardized=*/false);
  const model::ModelHandle trained = model::train_builtin(kind_, sub, labels_, seed_);
  const Matrix probs =
      model::predict_proba(trained, restrict_values(target.values, subset).transpose());
  return probs(0, target.predicted_class);
}

MarginalEvaluator::MarginalEvaluator(Matrix background, const model::ModelHandle& model)
    : background_(std::move(background)), model_(model) {
  if (background_.rows() == 0) throw InvalidParameter("marginal evaluation needs background rows");
}

double MarginalEvaluator::operator()(const std::vector<std::uint8_t>& subset,
                                     const TargetInstance& target) const {
  Matrix hybrids = background_;
  for (Index j = 0; j < hybrids.cols(); ++j)
    if (subset[static_cast<std::size_t>(j)]) hybrids.col(j).setConstant(target.values[j]);
  instrumentation::note_synthesized_rows(hybrids.rows());
  return model::predict_proba(model_, hybrids).col(target.predicted_class).mean();
}

AttributionVector shapley_exact(const Dataset& data, const LabelVector& labels,
                                const TargetInstance& target,
                                const SubsetEvaluator& evaluator) {
  const Index d = data.d();
  if (d > 15)
    throw SubsetBlowup("exact Shapley enumerates 2^d subsets; d = " + std::to_string(d) +
                       " is too large, use shapley_sampling instead");
  if (target.values.size() != d) throw DimensionMismatch("target width does not match dataset");
  if (labels.n() != data.n()) throw DimensionMismatch("label count does not match dataset");

  const std::uint32_t masks = 1u << d;
  std::vector<double> value(masks);
  for (std::uint32_t mask = 0; mask < masks; ++mask)
    value[mask] = evaluator(mask_to_subset(mask, d), target);

  const ShapleyWeights weights = ShapleyWeights::for_dim(d);
  Vector scores = Vector::Zero(d);
  for (Index s = 0; s < d; ++s) {
    const std::uint32_t bit = 1u << s;
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < masks; ++mask) {
      if (mask & bit) continue;
      const int size = std::popcount(mask);
      total += weights.by_size[static_cast<std::size_t>(size)] *
               (value[mask | bit] - value[mask]);
    }
    scores[s] = total;
  }
  return AttributionVector(std::move(scores), "shapley-exact", "");
}

namespace {

// Marginal evaluation: expected target-class probability over hybrid
// instances that take subset features from the target and the rest from the
// background rows. Hybrids are fabricated instances, hence the counter.
class CachedMarginal {
 public:
  CachedMarginal(const Matrix& background, const model::ModelHandle& model)
      : background_(background), model_(model) {}

  double operator()(std::uint32_t mask, const TargetInstance& target) {
    const auto memo = cache_.find(mask);
    if (memo != cache_.end()) return memo->second;
    Matrix hybrids = background_;
    for (Index j = 0; j < hybrids.cols(); ++j)
      if (mask & (1u << j)) hybrids.col(j).setConstant(target.values[j]);
    instrumentation::note_synthesized_rows(hybrids.rows());
    const Matrix probs = model::predict_proba(model_, hybrids);
    const double value = probs.col(target.predicted_class).mean();
    cache_.emplace(mask, value);
    return value;
  }

 private:
  const Matrix& background_;
  const model::ModelHandle& model_;
  std::unordered_map<std::uint32_t, double> cache_;
};

Matrix sample_background(const Dataset& data, int n_background, std::uint64_t seed) {
  const Index n = data.n();
  const Index take = std::min<Index>(n_background, n);
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  auto rng = make_rng(derive_seed(seed, {0xBACCu}));
  Matrix background(take, data.d());
  for (Index i = 0; i < take; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    background.row(i) = data.rows.row(pool[static_cast<std::size_t>(i)]);
  }
  return background;
}

}  // namespace

AttributionVector shapley_sampling(const Dataset& data, const LabelVector& labels,
                                   const TargetInstance& target,
                                   const model::ModelHandle& model, int n_subsets,
                                   int n_background, std::uint64_t seed) {
  const Index d = data.d();
  if (n_subsets < 1) throw InvalidParameter("n_subsets must be at least 1");
  if (target.values.size() != d) throw DimensionMismatch("target width does not match dataset");
  (void)labels;

  const Matrix background = sample_background(data, n_background, seed);
  CachedMarginal evaluate(background, model);
  Vector scores = Vector::Zero(d);

  const bool exhaustive = d <= 20 && (1LL << std::max<Index>(d - 1, 0)) <= n_subsets;
  if (exhaustive) {
    // Full enumeration with exact weights; equals marginal Shapley.
    const ShapleyWeights weights = ShapleyWeights::for_dim(d);
    const std::uint32_t masks = 1u << d;
    for (Index s = 0; s < d; ++s) {
      const std::uint32_t bit = 1u << s;
      double total = 0.0;
      for (std::uint32_t mask = 0; mask < masks; ++mask) {
        if (mask & bit) continue;
        total += weights.by_size[static_cast<std::size_t>(std::popcount(mask))] *
                 (evaluate(mask | bit, target) - evaluate(mask, target));
      }
      scores[s] = total;
    }
  } else {
    // M_S is a distribution over subsets of A \ {s}: uniform over sizes,
    // then uniform over subsets of that size. Sample from it directly.
    // Subsets are carried as flag vectors so any dimension works.
    const MarginalEvaluator marginal(background, model);
    auto rng = make_rng(derive_seed(seed, {0x5A3Bu}));
    std::vector<Index> others(static_cast<std::size_t>(d));
    std::vector<std::uint8_t> subset(static_cast<std::size_t>(d));
    for (Index s = 0; s < d; ++s) {
      others.clear();
      for (Index j = 0; j < d; ++j)
        if (j != s) others.push_back(j);
      double total = 0.0;
      for (int draw = 0; draw < n_subsets; ++draw) {
        std::uniform_int_distribution<Index> size_dist(0, d - 1);
        const Index size = size_dist(rng);
        for (Index i = 0; i < size; ++i) {
          std::uniform_int_distribution<Index> pick(i, static_cast<Index>(others.size()) - 1);
          std::swap(others[static_cast<std::size_t>(i)],
                    others[static_cast<std::size_t>(pick(rng))]);
        }
        std::fill(subset.begin(), subset.end(), 0);
        for (Index i = 0; i < size; ++i)
          subset[static_cast<std::size_t>(others[static_cast<std::size_t>(i)])] = 1;
        const double without = marginal(subset, target);
        subset[static_cast<std::size_t>(s)] = 1;
        total += marginal(subset, target) - without;
      }
      scores[s] = total / static_cast<double>(n_subsets);
    }
  }
  return AttributionVector(std::move(scores), "shapley-sampling", "");
}

namespace {

double accuracy(const model::ModelHandle& model, const Matrix& rows,
                const LabelVector& labels) {
  const std::vector<int> predicted = model::predict(model, rows);
  Index hits = 0;
  for (Index i = 0; i < rows.rows(); ++i)
    if (predicted[static_cast<std::size_t>(i)] == labels.labels[static_cast<std::size_t>(i)])
      ++hits;
  return static_cast<double>(hits) / static_cast<double>(rows.rows());
}

}  // namespace

AttributionVector pfi_with_permutations(const Dataset& data, const LabelVector& labels,
                                        const model::ModelHandle& model, int n_repeats,
                                        const PermutationSource& permutations) {
  if (data.n() < 2) throw InvalidData("PFI needs at least 2 rows");
  if (n_repeats < 1) throw InvalidParameter("n_repeats must be at least 1");
  const double baseline = accuracy(model, data.rows, labels);

  Vector scores(data.d());
  Matrix permuted = data.rows;
  for (Index s = 0; s < data.d(); ++s) {
    double drop_total = 0.0;
    for (int repeat = 0; repeat < n_repeats; ++repeat) {
      const std::vector<Index> perm = permutations(data.n(), s, repeat);
      for (Index i = 0; i < data.n(); ++i)
        permuted(i, s) = data.rows(perm[static_cast<std::size_t>(i)], s);
      instrumentation::note_synthesized_rows(data.n());
      drop_total += baseline - accuracy(model, permuted, labels);
    }
    permuted.col(s) = data.rows.col(s);
    scores[s] = drop_total / static_cast<double>(n_repeats);
  }
  return AttributionVector(std::move(scores), "pfi", "");
}

AttributionVector pfi(const Dataset& data, const LabelVector& labels,
                      const model::ModelHandle& model, int n_repeats, std::uint64_t seed) {
  return pfi_with_permutations(
      data, labels, model, n_repeats,
      [seed](Index n, Index feature, int repeat) {
        std::vector<Index> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), Index{0});
        auto rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(feature),
                                               static_cast<std::uint64_t>(repeat)}));
        std::shuffle(perm.begin(), perm.end(), rng);
        return perm;
      });
}

AttributionVector random_attribution(Index d, std::uint64_t seed) {
  if (d < 1) throw InvalidParameter("random attribution needs d >= 1");
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vector scores(d);
  for (Index j = 0; j < d; ++j) scores[j] = uniform(rng);
  return AttributionVector(std::move(scores), "random", "");
}

}  // namespace dfax::baselines
