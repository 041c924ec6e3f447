#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfax/explainer.hpp"
#include "dfax/model.hpp"
#include "dfax/types.hpp"

namespace dfax::eval {

// Target-class probability as a function of the fraction of features
// masked (deletion) or reintroduced (insertion). d+1 evenly spaced points
// including both endpoints; the score is the trapezoidal AUC.
struct EvaluationCurve {
  Vector xs;
  Vector ys;

  double auc() const;
};

struct TrialConfig {
  int n_trials = 100;
  std::uint64_t seed = 0;
  int jobs = 1;
};

// Mean AUC over n_trials of progressively masking features in ranking order
// (most important first) with fresh standard-normal draws in standardized
// space, reading the model's target-class probability after every step.
double deletion_score(const model::ModelHandle& model, const TargetInstance& target,
                      const AttributionRanking& ranking, const TrialConfig& config);

// Mirror protocol: start from a fully masked instance and reintroduce the
// true feature values in ranking order.
double insertion_score(const model::ModelHandle& model, const TargetInstance& target,
                       const AttributionRanking& ranking, const TrialConfig& config);

// Score plus the pointwise trial-mean curve, for plotting.
struct ProtocolResult {
  double score = 0.0;
  EvaluationCurve mean_curve;
};

ProtocolResult run_protocol(const model::ModelHandle& model, const TargetInstance& target,
                            const AttributionRanking& ranking, const TrialConfig& config,
                            bool insertion);

// Fractional average ranking over datasets: scores(i, j) is method j's score
// on dataset i; rank 1 is best. Ties receive the mean of their positions.
std::vector<double> average_ranking(const Matrix& scores, bool higher_is_better);

// ---------------------------------------------------------------------------
// Benchmark runner

struct MethodSpec {
  enum class Kind {
    DfaxExact,
    DfaxFeatureMap,
    DfaxSinne,
    ShapleySampling,
    Pfi,
    Random,
    Imported,
  };

  std::string name;
  Kind kind = Kind::Random;
  DfaxParams dfax;          // Dfax* kinds; seed/jobs filled by the runner
  int shapley_subsets = 64;
  int shapley_background = 100;
  int pfi_repeats = 5;
  Matrix imported_scores;   // Imported: one row per target
  bool external = false;
  bool distribution_supported = true;
};

struct BenchmarkTask {
  std::string name;
  Dataset data;                     // the unmodified dataset X
  LabelVector preds;                // model predictions (or labels) for X
  Matrix targets;                   // instances to explain
  std::vector<int> target_classes;  // predicted class per target
  const model::ModelHandle* model = nullptr;
};

struct BenchmarkConfig {
  int n_trials = 100;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct BenchmarkCell {
  bool ok = false;
  std::string error;
  double deletion_mean = 0.0;
  double insertion_mean = 0.0;
  double fit_seconds = 0.0;
  double seconds_per_attribution = 0.0;
  EvaluationCurve mean_deletion_curve;
  EvaluationCurve mean_insertion_curve;
};

// Per-method aggregates follow the published protocol: per-dataset means,
// cross-dataset averages, fractional average rankings, and a sanity flag for
// any method whose mean insertion falls below the random baseline.
struct BenchmarkReport {
  std::vector<std::string> method_names;
  std::vector<std::string> dataset_names;
  std::vector<BenchmarkCell> cells;  // method-major: cell(i, j) = methods[i] on datasets[j]
  std::vector<double> deletion_avg;
  std::vector<double> insertion_avg;
  std::vector<double> deletion_avg_rank;
  std::vector<double> insertion_avg_rank;
  std::vector<std::uint8_t> below_random;
  std::vector<std::uint8_t> method_external;
  std::vector<std::uint8_t> method_supported;

  const BenchmarkCell& cell(std::size_t method, std::size_t dataset) const {
    return cells[method * dataset_names.size() + dataset];
  }
  BenchmarkCell& cell(std::size_t method, std::size_t dataset) {
    return cells[method * dataset_names.size() + dataset];
  }
};

// Seeds are derived per (method, dataset, instance, trial) from the master
// seed, so reruns and any --jobs setting reproduce the same report. Failures
// are recorded per cell and the run continues.
BenchmarkReport run_benchmark(const std::vector<MethodSpec>& methods,
                              const std::vector<BenchmarkTask>& tasks,
                              const BenchmarkConfig& config);

}  // namespace dfax::eval
