#include "dfax/explainer.hpp"

#include <algorithm>
#include <cmath>

#include "dfax/parallel.hpp"
#include "dfax/rng.hpp"

namespace dfax {

ClassPartition ClassPartition::from_labels(const LabelVector& labels) {
  ClassPartition part;
  part.by_class.resize(static_cast<std::size_t>(labels.num_classes));
  for (Index i = 0; i < labels.n(); ++i)
    part.by_class[static_cast<std::size_t>(labels.labels[static_cast<std::size_t>(i)])]
        .push_back(i);
  return part;
}

std::string backend_name(Backend backend) {
  switch (backend) {
    case Backend::ExactGaussian: return "gaussian";
    case Backend::FeatureMapGaussian: return "feature-map";
    case Backend::Sinne: return "sinne";
  }
  throw InvalidParameter("unknown backend");
}

Backend backend_from_name(const std::string& name) {
  if (name == "gaussian") return Backend::ExactGaussian;
  if (name == "feature-map") return Backend::FeatureMapGaussian;
  if (name == "sinne") return Backend::Sinne;
  throw InvalidParameter("unknown backend '" + name + "' (use gaussian | feature-map | sinne)");
}

namespace {

// Gathers the feature-s values of the given rows, in row order.
Vector gather(const Matrix& rows, const std::vector<Index>& indices, Index feature) {
  Vector out(static_cast<Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i)
    out[static_cast<Index>(i)] = rows(indices[i], feature);
  return out;
}

double clamp_unit(double value, std::atomic<std::int64_t>& clamp_events) {
  if (value < 0.0 || value > 1.0) {
    ++clamp_events;
    return std::min(1.0, std::max(0.0, value));
  }
  return value;
}

}  // namespace

DfaxExplainer fit_explainer(const Dataset& data, const LabelVector& preds,
                            const DfaxParams& params) {
  if (data.n() == 0) throw EmptyDataset("cannot fit an explainer on an empty dataset");
  if (preds.n() != data.n())
    throw DimensionMismatch("prediction count does not match dataset rows");

  DfaxExplainer expl;
  expl.backend = params.backend;
  expl.num_classes = preds.num_classes;
  expl.dim = data.d();
  expl.feature_names = data.feature_names;
  expl.constant_feature = data.constant_column;
  expl.params = params;

  const ClassPartition partition = ClassPartition::from_labels(preds);
  expl.class_counts.resize(static_cast<std::size_t>(expl.num_classes));
  for (int c = 0; c < expl.num_classes; ++c) {
    expl.class_counts[static_cast<std::size_t>(c)] =
        static_cast<Index>(partition.by_class[static_cast<std::size_t>(c)].size());
    if (expl.class_counts[static_cast<std::size_t>(c)] == 0) expl.empty_classes.push_back(c);
  }

  const std::size_t cells = static_cast<std::size_t>(expl.dim) *
                            static_cast<std::size_t>(expl.num_classes);
  const Index d = expl.dim;
  const int m = expl.num_classes;

  switch (params.backend) {
    case Backend::ExactGaussian: {
      kde::validate(params.kernel);
      expl.class_support.resize(cells);
      for (Index s = 0; s < d; ++s)
        for (int c = 0; c < m; ++c)
          expl.class_support[expl.cell(s, c)] =
              gather(data.rows, partition.by_class[static_cast<std::size_t>(c)], s);
      break;
    }
    case Backend::FeatureMapGaussian: {
      kde::validate(params.kernel);
      if (params.map_dimension < 1) throw InvalidParameter("map dimension must be at least 1");
      expl.feature_maps.resize(static_cast<std::size_t>(d));
      expl.class_mean.resize(cells);
      expl.complement_mean.resize(cells);
      // One map per feature, shared by all classes of that feature; cells are
      // independent so the grid can be filled in parallel.
      parallel_for(d, params.jobs, [&](std::int64_t si) {
        const Index s = static_cast<Index>(si);
        auto& map = expl.feature_maps[static_cast<std::size_t>(s)];
        map = kde::build_feature_map(params.kernel, params.map_dimension,
                                     derive_seed(params.seed, {static_cast<std::uint64_t>(s)}));
        for (int c = 0; c < m; ++c) {
          const auto& members = partition.by_class[static_cast<std::size_t>(c)];
          if (members.empty()) continue;
          expl.class_mean[expl.cell(s, c)] = kde::mean_map(map, gather(data.rows, members, s));
        }
        // Pooled complement mean: count-weighted average of the other
        // classes' mean vectors, identical to mapping the pooled rows.
        for (int c = 0; c < m; ++c) {
          Vector sum = Vector::Zero(params.map_dimension);
          Index total = 0;
          for (int other = 0; other < m; ++other) {
            if (other == c) continue;
            const auto& mm = expl.class_mean[expl.cell(s, other)];
            if (mm.count == 0) continue;
            sum += mm.mean_vector * static_cast<double>(mm.count);
            total += mm.count;
          }
          if (total > 0) {
            kde::KernelMeanMap1D pooled;
            pooled.count = total;
            pooled.mean_vector = sum / static_cast<double>(total);
            expl.complement_mean[expl.cell(s, c)] = std::move(pooled);
          }
        }
      });
      break;
    }
    case Backend::Sinne: {
      sinne::validate(params.sinne);
      expl.class_sinne.resize(cells);
      expl.complement_sinne.resize(cells);
      expl.class_usable.assign(static_cast<std::size_t>(m), 1);
      for (int c = 0; c < m; ++c) {
        const Index count = expl.class_counts[static_cast<std::size_t>(c)];
        if (count >= params.sinne.psi) continue;
        expl.class_usable[static_cast<std::size_t>(c)] = 0;
        if (count > 0) expl.undersized_classes.push_back(c);
      }
      parallel_for(d, params.jobs, [&](std::int64_t si) {
        const Index s = static_cast<Index>(si);
        for (int c = 0; c < m; ++c) {
          sinne::SinneParams cell_params = params.sinne;
          if (expl.class_usable[static_cast<std::size_t>(c)]) {
            cell_params.seed = derive_seed(params.seed,
                                           {static_cast<std::uint64_t>(s),
                                            static_cast<std::uint64_t>(c), 0});
            expl.class_sinne[expl.cell(s, c)] = sinne::fit_sinne(
                gather(data.rows, partition.by_class[static_cast<std::size_t>(c)], s),
                cell_params);
          }
          // Complement rows pooled in original row order.
          std::vector<Index> pooled;
          for (Index i = 0; i < preds.n(); ++i)
            if (preds.labels[static_cast<std::size_t>(i)] != c) pooled.push_back(i);
          if (static_cast<Index>(pooled.size()) >= params.sinne.psi) {
            cell_params.seed = derive_seed(params.seed,
                                           {static_cast<std::uint64_t>(s),
                                            static_cast<std::uint64_t>(c), 1});
            expl.complement_sinne[expl.cell(s, c)] =
                sinne::fit_sinne(gather(data.rows, pooled, s), cell_params);
          }
        }
      });
      for (const auto& model : expl.class_sinne) expl.zero_radius_balls += model.zero_radius_balls;
      for (const auto& model : expl.complement_sinne)
        expl.zero_radius_balls += model.zero_radius_balls;
      break;
    }
  }
  return expl;
}

namespace {

// Density of `value` under the pooled complement of class `cls` for the
// exact backend: kernel sums of every other class combined, then divided by
// the pooled count. Identical to one estimator over the concatenated rows.
double exact_complement_density(const DfaxExplainer& expl, Index feature, int cls,
                                double value) {
  double kernel_sum = 0.0;
  Index total = 0;
  const double gamma = expl.params.kernel.gamma;
  for (int other = 0; other < expl.num_classes; ++other) {
    if (other == cls) continue;
    const Vector& support = expl.class_support[expl.cell(feature, other)];
    if (support.size() == 0) continue;
    kernel_sum += ((support.array() - value).square() * (-gamma)).exp().sum();
    total += support.size();
  }
  return kernel_sum / static_cast<double>(total);
}

}  // namespace

AttributionVector attribute(const DfaxExplainer& expl, const TargetInstance& target,
                            const std::string& target_ref) {
  if (target.values.size() != expl.dim)
    throw DimensionMismatch("target has " + std::to_string(target.values.size()) +
                            " features, explainer expects " + std::to_string(expl.dim));
  const int cls = target.predicted_class;
  if (cls < 0 || cls >= expl.num_classes)
    throw InvalidParameter("target class " + std::to_string(cls) + " outside [0, " +
                           std::to_string(expl.num_classes) + ")");
  if (expl.class_counts[static_cast<std::size_t>(cls)] == 0)
    throw MissingTargetClass("no dataset rows are predicted as class " + std::to_string(cls));
  Index complement_count = 0;
  for (int c = 0; c < expl.num_classes; ++c)
    if (c != cls) complement_count += expl.class_counts[static_cast<std::size_t>(c)];
  if (complement_count == 0)
    throw DegenerateComplement("every dataset row is predicted as the target class");

  if (expl.backend == Backend::Sinne) {
    if (!expl.class_usable[static_cast<std::size_t>(cls)])
      throw MissingTargetClass("class " + std::to_string(cls) +
                               " has fewer rows than psi; SiNNE cannot score it");
    if (complement_count < expl.params.sinne.psi)
      throw DegenerateComplement("complement smaller than psi");
  }

  Vector scores(expl.dim);
  auto& clamps = *expl.clamp_events;
  for (Index s = 0; s < expl.dim; ++s) {
    if (expl.constant_feature[static_cast<std::size_t>(s)]) {
      scores[s] = 0.0;  // flagged constant: definitionally uninformative
      continue;
    }
    const double value = target.values[s];
    double target_density = 0.0, complement_density = 0.0;
    switch (expl.backend) {
      case Backend::ExactGaussian: {
        const Vector& support = expl.class_support[expl.cell(s, cls)];
        target_density =
            ((support.array() - value).square() * (-expl.params.kernel.gamma)).exp().mean();
        complement_density = exact_complement_density(expl, s, cls, value);
        break;
      }
      case Backend::FeatureMapGaussian: {
        const auto& map = expl.feature_maps[static_cast<std::size_t>(s)];
        target_density = clamp_unit(
            kde::approx_density(expl.class_mean[expl.cell(s, cls)], map, value), clamps);
        complement_density = clamp_unit(
            kde::approx_density(expl.complement_mean[expl.cell(s, cls)], map, value), clamps);
        break;
      }
      case Backend::Sinne: {
        target_density = sinne::sinne_density(expl.class_sinne[expl.cell(s, cls)], value);
        complement_density =
            sinne::sinne_density(expl.complement_sinne[expl.cell(s, cls)], value);
        break;
      }
    }
    scores[s] = target_density - complement_density;
  }
  return AttributionVector(std::move(scores), "dfax-" + backend_name(expl.backend), target_ref);
}

std::vector<AttributionVector> attribute_batch(const DfaxExplainer& expl,
                                               const std::vector<TargetInstance>& targets,
                                               int jobs) {
  std::vector<AttributionVector> out(targets.size());
  parallel_for(static_cast<std::int64_t>(targets.size()), jobs, [&](std::int64_t i) {
    try {
      out[static_cast<std::size_t>(i)] =
          attribute(expl, targets[static_cast<std::size_t>(i)], std::to_string(i));
    } catch (const Error& e) {
      throw Error("target " + std::to_string(i) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace dfax
