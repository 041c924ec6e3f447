#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dfax/kde.hpp"
#include "dfax/sinne.hpp"
#include "dfax/types.hpp"

namespace dfax {

// Row indices of the dataset grouped by predicted class.
struct ClassPartition {
  std::vector<std::vector<Index>> by_class;

  static ClassPartition from_labels(const LabelVector& labels);
};

enum class Backend { ExactGaussian, FeatureMapGaussian, Sinne };

std::string backend_name(Backend backend);
Backend backend_from_name(const std::string& name);

struct DfaxParams {
  Backend backend = Backend::ExactGaussian;
  kde::GaussianKernelParams kernel;  // Gaussian backends
  Index map_dimension = 2048;        // feature-map backend
  sinne::SinneParams sinne;          // SiNNE backend
  std::uint64_t seed = 0;
  int jobs = 1;  // fit-time parallelism over the feature grid
};

// A fitted attribution model: per (feature, class) one-dimensional density
// estimators over the unmodified dataset rows of that class, plus per
// (feature, class) complement estimators over all rows predicted otherwise.
// The explainer holds no reference to the classifier; attribution is a pure
// read over the fitted state.
struct DfaxExplainer {
  Backend backend = Backend::ExactGaussian;
  int num_classes = 0;
  Index dim = 0;
  std::vector<std::string> feature_names;
  std::vector<std::uint8_t> constant_feature;
  std::vector<Index> class_counts;
  DfaxParams params;

  // Exact Gaussian: per (feature, class) support values; complement densities
  // are pooled from the per-class supports of the other classes.
  std::vector<Vector> class_support;  // cell(s, c)

  // Feature-map Gaussian: one shared map per feature so the mean maps of all
  // classes stay comparable, plus class and pooled-complement mean maps.
  std::vector<kde::FeatureMap1D> feature_maps;         // per feature
  std::vector<kde::KernelMeanMap1D> class_mean;        // cell(s, c)
  std::vector<kde::KernelMeanMap1D> complement_mean;   // cell(s, c)

  // SiNNE: class and pooled-complement models per cell. Classes with fewer
  // rows than psi cannot be fitted and are flagged unusable.
  std::vector<sinne::SinneModel1D> class_sinne;       // cell(s, c)
  std::vector<sinne::SinneModel1D> complement_sinne;  // cell(s, c)
  std::vector<std::uint8_t> class_usable;

  // Diagnostics.
  std::vector<int> empty_classes;
  std::vector<int> undersized_classes;  // SiNNE: 0 < rows < psi
  std::int64_t zero_radius_balls = 0;
  // Shared so the explainer stays copyable; attribution may run concurrently.
  std::shared_ptr<std::atomic<std::int64_t>> clamp_events =
      std::make_shared<std::atomic<std::int64_t>>(0);

  std::size_t cell(Index feature, int cls) const {
    return static_cast<std::size_t>(feature) * static_cast<std::size_t>(num_classes) +
           static_cast<std::size_t>(cls);
  }
};

// Fits the full d x m estimator grid from the dataset rows as they are; no
// synthetic or perturbed instance is ever created here, and the classifier is
// never consulted (predictions arrive precomputed in `preds`).
DfaxExplainer fit_explainer(const Dataset& data, const LabelVector& preds,
                            const DfaxParams& params);

// Per-feature score: density of the target's value under the target-class
// estimator minus its density under the pooled complement estimator. Both
// densities are clamped to [0, 1] first, so scores live in [-1, 1].
AttributionVector attribute(const DfaxExplainer& expl, const TargetInstance& target,
                            const std::string& target_ref = "");

// Element-wise identical to calling attribute() per target; targets may be
// evaluated concurrently.
std::vector<AttributionVector> attribute_batch(const DfaxExplainer& expl,
                                               const std::vector<TargetInstance>& targets,
                                               int jobs = 1);

}  // namespace dfax
