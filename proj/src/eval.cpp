#include "dfax/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "dfax/baselines.hpp"
#include "dfax/instrumentation.hpp"
#include "dfax/parallel.hpp"
#include "dfax/ranking.hpp"
#include "dfax/rng.hpp"

namespace dfax::eval {

double EvaluationCurve::auc() const {
  const Index steps = ys.size() - 1;
  double inner = 0.0;
  for (Index i = 1; i < steps; ++i) inner += ys[i];
  return (0.5 * (ys[0] + ys[steps]) + inner) / static_cast<double>(steps);
}

namespace {

// One trial: the d+1 progressive instances are scored in a single batched
// model call. Deletion walks from the intact target to fully masked;
// insertion walks from fully masked back to the intact target. Masks are
// fresh standard-normal draws in standardized space every trial.
Vector trial_probabilities(const model::ModelHandle& model, const TargetInstance& target,
                           const AttributionRanking& ranking, std::uint64_t trial_seed,
                           bool insertion) {
  const Index d = target.values.size();
  auto rng = make_rng(trial_seed);
  std::normal_distribution<double> standard_normal(0.0, 1.0);
  Vector masks(d);
  for (Index j = 0; j < d; ++j) masks[j] = standard_normal(rng);

  Matrix states(d + 1, d);
  if (insertion) {
    Vector current = masks;
    states.row(0) = current.transpose();
    for (Index step = 0; step < d; ++step) {
      const Index feature = ranking.order[static_cast<std::size_t>(step)];
      current[feature] = target.values[feature];
      states.row(step + 1) = current.transpose();
    }
    instrumentation::note_synthesized_rows(d);  // all but the final restored row
  } else {
    Vector current = target.values;
    states.row(0) = current.transpose();
    for (Index step = 0; step < d; ++step) {
      const Index feature = ranking.order[static_cast<std::size_t>(step)];
      current[feature] = masks[feature];
      states.row(step + 1) = current.transpose();
    }
    instrumentation::note_synthesized_rows(d);  // all but the intact first row
  }

  const Matrix probs = model::predict_proba(model, states);
  return probs.col(target.predicted_class);
}

}  // namespace

ProtocolResult run_protocol(const model::ModelHandle& model, const TargetInstance& target,
                            const AttributionRanking& ranking, const TrialConfig& config,
                            bool insertion) {
  const Index d = target.values.size();
  if (d < 1) throw InvalidParameter("protocol needs at least one feature");
  if (static_cast<Index>(ranking.order.size()) != d)
    throw DimensionMismatch("ranking length does not match target dimension");
  if (config.n_trials < 1) throw InvalidParameter("n_trials must be at least 1");
  if (target.predicted_class < 0 || target.predicted_class >= model.num_classes)
    throw InvalidParameter("target class outside the model's class range");

  Matrix per_trial(config.n_trials, d + 1);
  parallel_for(config.n_trials, config.jobs, [&](std::int64_t t) {
    try {
      per_trial.row(t) = trial_probabilities(
          model, target, ranking,
          derive_seed(config.seed, {static_cast<std::uint64_t>(t)}), insertion)
                             .transpose();
    } catch (const ModelUnavailable& e) {
      throw TrialFailed("trial " + std::to_string(t) + " aborted mid-curve: " + e.what());
    } catch (const InvalidModelOutput& e) {
      throw TrialFailed("trial " + std::to_string(t) + " aborted mid-curve: " + e.what());
    }
  });

  ProtocolResult result;
  result.mean_curve.xs.resize(d + 1);
  for (Index i = 0; i <= d; ++i)
    result.mean_curve.xs[i] = static_cast<double>(i) / static_cast<double>(d);
  result.mean_curve.ys = per_trial.colwise().mean().transpose();

  double total = 0.0;
  for (int t = 0; t < config.n_trials; ++t) {
    EvaluationCurve curve{result.mean_curve.xs, per_trial.row(t).transpose()};
    total += curve.auc();
  }
  result.score = total / static_cast<double>(config.n_trials);
  return result;
}

double deletion_score(const model::ModelHandle& model, const TargetInstance& target,
                      const AttributionRanking& ranking, const TrialConfig& config) {
  return run_protocol(model, target, ranking, config, /*insertion=*/false).score;
}

double insertion_score(const model::ModelHandle& model, const TargetInstance& target,
                       const AttributionRanking& ranking, const TrialConfig& config) {
  return run_protocol(model, target, ranking, config, /*insertion=*/true).score;
}

std::vector<double> average_ranking(const Matrix& scores, bool higher_is_better) {
  const Index datasets = scores.rows(), methods = scores.cols();
  if (datasets == 0 || methods == 0) throw InvalidParameter("ranking needs a non-empty matrix");
  std::vector<double> totals(static_cast<std::size_t>(methods), 0.0);
  std::vector<Index> order(static_cast<std::size_t>(methods));
  for (Index i = 0; i < datasets; ++i) {
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return higher_is_better ? scores(i, a) > scores(i, b) : scores(i, a) < scores(i, b);
    });
    // Fractional ranks: tied scores share the mean of their positions.
    std::size_t pos = 0;
    while (pos < order.size()) {
      std::size_t end = pos + 1;
      while (end < order.size() &&
             scores(i, order[end]) == scores(i, order[pos]))
        ++end;
      const double rank = (static_cast<double>(pos + 1) + static_cast<double>(end)) / 2.0;
      for (std::size_t k = pos; k < end; ++k)
        totals[static_cast<std::size_t>(order[k])] += rank;
      pos = end;
    }
  }
  for (double& total : totals) total /= static_cast<double>(datasets);
  return totals;
}

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point begin = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  }
};

// Attribution vectors for every target of a task under one method.
std::vector<AttributionVector> run_method(const MethodSpec& method, const BenchmarkTask& task,
                                          std::uint64_t seed, int jobs, double* fit_seconds,
                                          double* attribution_seconds) {
  const Index n_targets = task.targets.rows();
  std::vector<AttributionVector> out(static_cast<std::size_t>(n_targets));
  const auto targets_of = [&](Index i) {
    return TargetInstance{task.targets.row(i).transpose(),
                          task.target_classes[static_cast<std::size_t>(i)]};
  };

  switch (method.kind) {
    case MethodSpec::Kind::DfaxExact:
    case MethodSpec::Kind::DfaxFeatureMap:
    case MethodSpec::Kind::DfaxSinne: {
      DfaxParams params = method.dfax;
      params.backend = method.kind == MethodSpec::Kind::DfaxExact ? Backend::ExactGaussian
                       : method.kind == MethodSpec::Kind::DfaxFeatureMap
                           ? Backend::FeatureMapGaussian
                           : Backend::Sinne;
      params.seed = seed;
      params.sinne.seed = seed;
      params.jobs = jobs;
      Stopwatch fit_watch;
      const DfaxExplainer expl = fit_explainer(task.data, task.preds, params);
      *fit_seconds = fit_watch.seconds();
      Stopwatch attr_watch;
      std::vector<TargetInstance> targets;
      targets.reserve(static_cast<std::size_t>(n_targets));
      for (Index i = 0; i < n_targets; ++i) targets.push_back(targets_of(i));
      out = attribute_batch(expl, targets, jobs);
      *attribution_seconds = attr_watch.seconds();
      break;
    }
    case MethodSpec::Kind::ShapleySampling: {
      Stopwatch attr_watch;
      parallel_for(n_targets, jobs, [&](std::int64_t i) {
        out[static_cast<std::size_t>(i)] = baselines::shapley_sampling(
            task.data, task.preds, targets_of(static_cast<Index>(i)), *task.model,
            method.shapley_subsets, method.shapley_background,
            derive_seed(seed, {static_cast<std::uint64_t>(i)}));
      });
      *attribution_seconds = attr_watch.seconds();
      break;
    }
    case MethodSpec::Kind::Pfi: {
      // Global method: one ranking reused for every instance.
      Stopwatch fit_watch;
      const AttributionVector global =
          baselines::pfi(task.data, task.preds, *task.model, method.pfi_repeats, seed);
      *fit_seconds = fit_watch.seconds();
      for (Index i = 0; i < n_targets; ++i) out[static_cast<std::size_t>(i)] = global;
      break;
    }
    case MethodSpec::Kind::Random: {
      Stopwatch attr_watch;
      for (Index i = 0; i < n_targets; ++i)
        out[static_cast<std::size_t>(i)] = baselines::random_attribution(
            task.data.d(), derive_seed(seed, {static_cast<std::uint64_t>(i)}));
      *attribution_seconds = attr_watch.seconds();
      break;
    }
    case MethodSpec::Kind::Imported: {
      if (method.imported_scores.rows() < n_targets ||
          method.imported_scores.cols() != task.data.d())
        throw DimensionMismatch("imported attribution table does not cover the targets");
      for (Index i = 0; i < n_targets; ++i)
        out[static_cast<std::size_t>(i)] = AttributionVector(
            method.imported_scores.row(i).transpose(), method.name, std::to_string(i));
      break;
    }
  }
  if (attribution_seconds && n_targets > 0) *attribution_seconds /= static_cast<double>(n_targets);
  return out;
}

void accumulate_curve(EvaluationCurve& total, const EvaluationCurve& part) {
  if (total.ys.size() == 0) {
    total = part;
  } else {
    total.ys += part.ys;
  }
}

}  // namespace

BenchmarkReport run_benchmark(const std::vector<MethodSpec>& methods,
                              const std::vector<BenchmarkTask>& tasks,
                              const BenchmarkConfig& config) {
  if (methods.empty()) throw InvalidParameter("benchmark needs at least one method");
  if (tasks.empty()) throw InvalidParameter("benchmark needs at least one dataset");

  BenchmarkReport report;
  for (const auto& method : methods) {
    report.method_names.push_back(method.name);
    report.method_external.push_back(method.external ? 1 : 0);
    report.method_supported.push_back(method.distribution_supported ? 1 : 0);
  }
  for (const auto& task : tasks) report.dataset_names.push_back(task.name);
  report.cells.resize(methods.size() * tasks.size());

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t di = 0; di < tasks.size(); ++di) {
      BenchmarkCell& cell = report.cell(mi, di);
      const BenchmarkTask& task = tasks[di];
      try {
        if (task.model == nullptr) throw InvalidParameter("task has no model");
        const std::uint64_t method_seed =
            derive_seed(config.seed, {static_cast<std::uint64_t>(mi),
                                      static_cast<std::uint64_t>(di)});
        const std::vector<AttributionVector> attributions =
            run_method(methods[mi], task, method_seed, config.jobs, &cell.fit_seconds,
                       &cell.seconds_per_attribution);

        const Index n_targets = task.targets.rows();
        Vector deletion(n_targets), insertion(n_targets);
        std::vector<EvaluationCurve> del_curves(static_cast<std::size_t>(n_targets));
        std::vector<EvaluationCurve> ins_curves(static_cast<std::size_t>(n_targets));
        parallel_for(n_targets, config.jobs, [&](std::int64_t i) {
          const AttributionRanking ranking =
              rank_features(attributions[static_cast<std::size_t>(i)]);
          const TargetInstance target{task.targets.row(i).transpose(),
                                      task.target_classes[static_cast<std::size_t>(i)]};
          TrialConfig trial_config;
          trial_config.n_trials = config.n_trials;
          trial_config.jobs = 1;  // instances are already parallel
          trial_config.seed = derive_seed(config.seed,
                                          {static_cast<std::uint64_t>(mi),
                                           static_cast<std::uint64_t>(di),
                                           static_cast<std::uint64_t>(i), 0});
          const ProtocolResult del = run_protocol(*task.model, target, ranking, trial_config,
                                                  /*insertion=*/false);
          trial_config.seed = derive_seed(config.seed,
                                          {static_cast<std::uint64_t>(mi),
                                           static_cast<std::uint64_t>(di),
                                           static_cast<std::uint64_t>(i), 1});
          const ProtocolResult ins = run_protocol(*task.model, target, ranking, trial_config,
                                                  /*insertion=*/true);
          deletion[i] = del.score;
          insertion[i] = ins.score;
          del_curves[static_cast<std::size_t>(i)] = del.mean_curve;
          ins_curves[static_cast<std::size_t>(i)] = ins.mean_curve;
        });

        cell.deletion_mean = deletion.mean();
        cell.insertion_mean = insertion.mean();
        for (Index i = 0; i < n_targets; ++i) {
          accumulate_curve(cell.mean_deletion_curve, del_curves[static_cast<std::size_t>(i)]);
          accumulate_curve(cell.mean_insertion_curve, ins_curves[static_cast<std::size_t>(i)]);
        }
        if (n_targets > 0) {
          cell.mean_deletion_curve.ys /= static_cast<double>(n_targets);
          cell.mean_insertion_curve.ys /= static_cast<double>(n_targets);
        }
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    }
  }

  // Cross-dataset aggregates over the cells that succeeded everywhere.
  const std::size_t n_methods = methods.size(), n_tasks = tasks.size();
  report.deletion_avg.assign(n_methods, std::numeric_limits<double>::quiet_NaN());
  report.insertion_avg.assign(n_methods, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    double del = 0.0, ins = 0.0;
    std::size_t ok_count = 0;
    for (std::size_t di = 0; di < n_tasks; ++di) {
      const BenchmarkCell& cell = report.cell(mi, di);
      if (!cell.ok) continue;
      del += cell.deletion_mean;
      ins += cell.insertion_mean;
      ++ok_count;
    }
    if (ok_count > 0) {
      report.deletion_avg[mi] = del / static_cast<double>(ok_count);
      report.insertion_avg[mi] = ins / static_cast<double>(ok_count);
    }
  }

  // Rankings use only datasets where every method succeeded.
  std::vector<std::size_t> complete;
  for (std::size_t di = 0; di < n_tasks; ++di) {
    bool all_ok = true;
    for (std::size_t mi = 0; mi < n_methods; ++mi) all_ok &= report.cell(mi, di).ok;
    if (all_ok) complete.push_back(di);
  }
  report.deletion_avg_rank.assign(n_methods, std::numeric_limits<double>::quiet_NaN());
  report.insertion_avg_rank.assign(n_methods, std::numeric_limits<double>::quiet_NaN());
  if (!complete.empty()) {
    Matrix del(static_cast<Index>(complete.size()), static_cast<Index>(n_methods));
    Matrix ins(static_cast<Index>(complete.size()), static_cast<Index>(n_methods));
    for (std::size_t r = 0; r < complete.size(); ++r)
      for (std::size_t mi = 0; mi < n_methods; ++mi) {
        del(static_cast<Index>(r), static_cast<Index>(mi)) =
            report.cell(mi, complete[r]).deletion_mean;
        ins(static_cast<Index>(r), static_cast<Index>(mi)) =
            report.cell(mi, complete[r]).insertion_mean;
      }
    report.deletion_avg_rank = average_ranking(del, /*higher_is_better=*/false);
    report.insertion_avg_rank = average_ranking(ins, /*higher_is_better=*/true);
  }

  // Sanity check: insertion below the random baseline.
  report.below_random.assign(n_methods, 0);
  std::size_t random_index = n_methods;
  for (std::size_t mi = 0; mi < n_methods; ++mi)
    if (methods[mi].kind == MethodSpec::Kind::Random) random_index = mi;
  if (random_index < n_methods && !std::isnan(report.insertion_avg[random_index])) {
    for (std::size_t mi = 0; mi < n_methods; ++mi)
      if (mi != random_index && !std::isnan(report.insertion_avg[mi]) &&
          report.insertion_avg[mi] < report.insertion_avg[random_index])
        report.below_random[mi] = 1;
  }
  return report;
}

}  // namespace dfax::eval
