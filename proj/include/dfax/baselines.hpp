#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dfax/model.hpp"
#include "dfax/types.hpp"

namespace dfax::baselines {

// Shapley subset weights M(k) = k! (d-1-k)! / d! indexed by subset size.
// Summed over all subsets of A \ {s} they form a probability distribution,
// which is what makes subset sampling an unbiased estimator.
struct ShapleyWeights {
  std::vector<double> by_size;

  static ShapleyWeights for_dim(Index d);
};

// Maps (feature subset, target) to the estimated probability of the target's
// class when only those features are available.
class SubsetEvaluator {
 public:
  virtual ~SubsetEvaluator() = default;
  virtual double operator()(const std::vector<std::uint8_t>& subset,
                            const TargetInstance& target) const = 0;
};

// RETRAIN strategy: trains a fresh built-in classifier on the dataset
// restricted to the subset's columns and reads the target-class probability.
// The empty subset returns the empirical frequency of the target class in
// the training labels. The shared dataset is never mutated.
class RetrainEvaluator : public SubsetEvaluator {
 public:
  RetrainEvaluator(model::BuiltinKind kind, const Dataset& data, const LabelVector& labels,
                   std::uint64_t seed);
  double operator()(const std::vector<std::uint8_t>& subset,
                    const TargetInstance& target) const override;

 private:
  model::BuiltinKind kind_;
  const Dataset& data_;
  const LabelVector& labels_;
  std::uint64_t seed_;
  std::vector<double> class_frequency_;
};

// MARGINAL strategy: expected model output over hybrid instances that take
// the subset's feature values from the target and the rest from a background
// set. The hybrids are fabricated rows, so attributions built on this
// evaluator are not supported by the data distribution.
class MarginalEvaluator : public SubsetEvaluator {
 public:
  MarginalEvaluator(Matrix background, const model::ModelHandle& model);
  double operator()(const std::vector<std::uint8_t>& subset,
                    const TargetInstance& target) const override;

 private:
  Matrix background_;
  const model::ModelHandle& model_;
};

// Exact Shapley regression values by full power-set enumeration; guarded to
// d <= 15. Satisfies efficiency: scores sum to F_A - F_empty.
AttributionVector shapley_exact(const Dataset& data, const LabelVector& labels,
                                const TargetInstance& target, const SubsetEvaluator& evaluator);

// Monte-Carlo Shapley sampling values with marginal (hybrid-instance)
// evaluation against a seeded background sample. Hybrid instances mix target
// and background feature values, so these scores are NOT supported by the
// data distribution; reports tag them accordingly. When n_subsets covers the
// full power set the estimate switches to exact weighted enumeration.
AttributionVector shapley_sampling(const Dataset& data, const LabelVector& labels,
                                   const TargetInstance& target,
                                   const model::ModelHandle& model, int n_subsets,
                                   int n_background, std::uint64_t seed);

// Permutation feature importance: drop in accuracy after permuting each
// column, averaged over n_repeats seeded permutations. One global vector per
// model, not per instance.
AttributionVector pfi(const Dataset& data, const LabelVector& labels,
                      const model::ModelHandle& model, int n_repeats, std::uint64_t seed);

// Test hook: PFI with a caller-supplied permutation source
// (n, feature, repeat) -> row permutation.
using PermutationSource =
    std::function<std::vector<Index>(Index n, Index feature, int repeat)>;
AttributionVector pfi_with_permutations(const Dataset& data, const LabelVector& labels,
                                        const model::ModelHandle& model, int n_repeats,
                                        const PermutationSource& permutations);

// Sanity-check baseline: d i.i.d. uniform scores.
AttributionVector random_attribution(Index d, std::uint64_t seed);

}  // namespace dfax::baselines
