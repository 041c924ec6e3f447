// dfax command-line tool: fit / attribute / evaluate / benchmark / plot.
//
// Exit codes: 0 success, 2 input or configuration error, 3 dimension or
// consistency error, 4 model endpoint failure.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "dfax/baselines.hpp"
#include "dfax/eval.hpp"
#include "dfax/explainer.hpp"
#include "dfax/io.hpp"
#include "dfax/model.hpp"
#include "dfax/ranking.hpp"
#include "dfax/rng.hpp"
#include "dfax/standardize.hpp"

namespace {

using namespace dfax;

struct Stopwatch {
  std::chrono::steady_clock::time_point begin = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  }
};

struct EndpointOptions {
  int timeout_ms = 30000;
  int max_batch = 128;
  int concurrency = 1;
  int model_classes = 0;
};

// --model accepts builtin:logistic, builtin:centroid, an http(s):// URL, or
// exec:<command>. DFAX_ENDPOINT_URL overrides the URL of external HTTP
// endpoints; DFAX_ENDPOINT_TIMEOUT_MS overrides the timeout.
model::ModelHandle resolve_model(const std::string& spec, const Dataset& data,
                                 const LabelVector& labels, std::uint64_t seed,
                                 const EndpointOptions& options) {
  if (spec.rfind("builtin:", 0) == 0)
    return model::train_builtin(model::builtin_from_name(spec.substr(8)), data, labels, seed);

  model::EndpointDescriptor endpoint;
  endpoint.timeout_ms = options.timeout_ms;
  endpoint.max_batch = options.max_batch;
  endpoint.concurrency = options.concurrency;
  if (const char* env_timeout = std::getenv("DFAX_ENDPOINT_TIMEOUT_MS"))
    endpoint.timeout_ms = std::atoi(env_timeout);

  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
    endpoint.transport = model::Transport::Http;
    endpoint.target = spec;
    if (const char* env_url = std::getenv("DFAX_ENDPOINT_URL")) endpoint.target = env_url;
  } else if (spec.rfind("exec:", 0) == 0) {
    endpoint.transport = model::Transport::Subprocess;
    endpoint.target = spec.substr(5);
  } else {
    throw InvalidParameter("bad --model '" + spec +
                           "' (use builtin:logistic, builtin:centroid, http://..., exec:...)");
  }
  const int classes = options.model_classes > 0 ? options.model_classes : labels.num_classes;
  if (classes < 1)
    throw InvalidParameter("external model needs --model-classes");
  return model::ModelHandle::external(endpoint, classes, data.d());
}

int class_of_label_string(const std::string& raw, const std::vector<std::string>& label_names) {
  for (std::size_t c = 0; c < label_names.size(); ++c)
    if (label_names[c] == raw) return static_cast<int>(c);
  throw DimensionMismatch("target label '" + raw + "' was not present when the snapshot was fit");
}

// ---------------------------------------------------------------------------
// fit

struct FitOptions {
  std::string data_path, label_column, model_spec, out_path;
  bool no_header = false;
  bool use_labels = false;
  std::string backend = "gaussian";
  double gamma = 1.0;
  Index map_dim = 2048;
  int psi = 2;
  int trees = 1000;
  std::uint64_t seed = 0;
  int jobs = 1;
  EndpointOptions endpoint;
};

int run_fit(const FitOptions& options) {
  // The whole configuration is validated before any data is touched.
  DfaxParams dfax_params;
  dfax_params.backend = backend_from_name(options.backend);
  dfax_params.kernel.gamma = options.gamma;
  dfax_params.map_dimension = options.map_dim;
  dfax_params.sinne.psi = options.psi;
  dfax_params.sinne.ensemble_size = options.trees;
  dfax_params.sinne.seed = options.seed;
  dfax_params.seed = options.seed;
  dfax_params.jobs = options.jobs;
  kde::validate(dfax_params.kernel);
  sinne::validate(dfax_params.sinne);
  if (dfax_params.map_dimension < 1) throw InvalidParameter("--map-dim must be at least 1");
  if (options.jobs < 1) throw InvalidParameter("--jobs must be at least 1");

  const io::CsvData csv = io::load_csv(options.data_path, options.label_column,
                                       !options.no_header);
  auto [data, params] = standardize(csv.features, csv.feature_names);
  const LabelVector labels(csv.labels, csv.num_classes);

  LabelVector preds = labels;
  if (!options.use_labels && !options.model_spec.empty()) {
    const model::ModelHandle classifier =
        resolve_model(options.model_spec, data, labels, options.seed, options.endpoint);
    preds = model::predict_labels(classifier, data.rows);
  }

  Stopwatch watch;
  io::ExplainerSnapshot snapshot;
  snapshot.explainer = fit_explainer(data, preds, dfax_params);
  const double fit_seconds = watch.seconds();
  snapshot.standardization = params;
  snapshot.label_names = csv.label_names;
  // External models may declare more classes than the label column shows.
  for (int c = static_cast<int>(snapshot.label_names.size()); c < preds.num_classes; ++c)
    snapshot.label_names.push_back(std::to_string(c));
  snapshot.dataset_hash = io::dataset_hash(data.rows);
  io::save_explainer(options.out_path, snapshot);

  std::cout << "fit: n=" << data.n() << " d=" << data.d() << " m=" << preds.num_classes
            << " backend=" << options.backend << " fit_seconds=" << fit_seconds << '\n'
            << "snapshot: " << options.out_path << '\n';
  if (!snapshot.explainer.empty_classes.empty()) {
    std::cout << "warning: classes without rows:";
    for (int c : snapshot.explainer.empty_classes) std::cout << ' ' << c;
    std::cout << '\n';
  }
  for (int c : snapshot.explainer.undersized_classes)
    std::cout << "warning: class " << c << " has fewer rows than psi\n";
  return 0;
}

// ---------------------------------------------------------------------------
// attribute

struct AttributeOptions {
  std::string snapshot_path, targets_path, label_column, model_spec, out_path;
  bool no_header = false;
  int top_k = 0;
  int jobs = 1;
  EndpointOptions endpoint;
};

int run_attribute(const AttributeOptions& options) {
  const io::ExplainerSnapshot snapshot = io::load_explainer(options.snapshot_path);
  const DfaxExplainer& expl = snapshot.explainer;

  const io::CsvData csv = io::load_csv(options.targets_path, options.label_column,
                                       !options.no_header);
  if (csv.features.cols() != expl.dim)
    throw DimensionMismatch("targets have " + std::to_string(csv.features.cols()) +
                            " features, snapshot expects " + std::to_string(expl.dim));

  Matrix standardized(csv.features.rows(), csv.features.cols());
  for (Index i = 0; i < csv.features.rows(); ++i)
    standardized.row(i) =
        standardize_row(csv.features.row(i).transpose(), snapshot.standardization).transpose();

  std::vector<int> classes(static_cast<std::size_t>(csv.features.rows()));
  if (!options.model_spec.empty()) {
    if (options.model_spec.rfind("builtin:", 0) == 0)
      throw InvalidParameter(
          "builtin models need training data; attribute reads predicted classes from the "
          "targets' label column, or query an external endpoint with --model");
    Dataset targets_view(standardized, expl.feature_names, false);
    LabelVector dummy(csv.labels, std::max(csv.num_classes, expl.num_classes));
    EndpointOptions endpoint = options.endpoint;
    if (endpoint.model_classes == 0) endpoint.model_classes = expl.num_classes;
    const model::ModelHandle classifier =
        resolve_model(options.model_spec, targets_view, dummy, expl.params.seed, endpoint);
    classes = model::predict(classifier, standardized);
  } else {
    // Label column carries the predicted class, mapped exactly as at fit time.
    for (std::size_t i = 0; i < classes.size(); ++i)
      classes[i] =
          class_of_label_string(csv.label_names[static_cast<std::size_t>(csv.labels[i])],
                                snapshot.label_names);
  }

  std::vector<TargetInstance> targets;
  targets.reserve(classes.size());
  for (Index i = 0; i < standardized.rows(); ++i)
    targets.push_back({standardized.row(i).transpose(),
                       classes[static_cast<std::size_t>(i)]});

  const std::vector<AttributionVector> attributions =
      attribute_batch(expl, targets, options.jobs);

  io::AttributionFile file;
  file.header.method = attributions.empty() ? "dfax" : attributions.front().method_tag;
  file.header.dataset_hash = snapshot.dataset_hash;
  file.header.d = expl.dim;
  file.header.seed = expl.params.seed;
  file.scores.resize(static_cast<Index>(attributions.size()), expl.dim);
  for (std::size_t i = 0; i < attributions.size(); ++i) {
    file.ids.push_back(std::to_string(i));
    file.scores.row(static_cast<Index>(i)) = attributions[i].scores.transpose();
  }
  io::save_attributions(options.out_path, file, expl.feature_names);
  std::cout << "attributions: " << attributions.size() << " rows -> " << options.out_path
            << '\n';

  if (options.top_k > 0) {
    const int k = std::min<int>(options.top_k, static_cast<int>(expl.dim));
    for (std::size_t i = 0; i < attributions.size(); ++i) {
      const AttributionRanking ranking = rank_features(attributions[i]);
      std::cout << "target " << i << " top-" << k << ':';
      for (int j = 0; j < k; ++j)
        std::cout << ' '
                  << expl.feature_names[static_cast<std::size_t>(
                         ranking.order[static_cast<std::size_t>(j)])];
      std::cout << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  std::string data_path, label_column, model_spec = "builtin:logistic";
  std::string targets_path, attributions_path;
  std::string out_path, curves_path, plot_path;
  bool no_header = false;
  int trials = 100;
  std::uint64_t seed = 0;
  int jobs = 1;
  EndpointOptions endpoint;
};

int run_evaluate(const EvaluateOptions& options) {
  if (options.trials < 1) throw InvalidParameter("--trials must be at least 1");
  if (options.jobs < 1) throw InvalidParameter("--jobs must be at least 1");
  const io::CsvData csv = io::load_csv(options.data_path, options.label_column,
                                       !options.no_header);
  auto [data, params] = standardize(csv.features, csv.feature_names);
  const LabelVector labels(csv.labels, csv.num_classes);
  const model::ModelHandle classifier =
      resolve_model(options.model_spec, data, labels, options.seed, options.endpoint);

  const io::CsvData targets_csv = io::load_csv(options.targets_path, options.label_column,
                                               !options.no_header);
  if (targets_csv.features.cols() != data.d())
    throw DimensionMismatch("targets do not match the dataset width");
  Matrix targets(targets_csv.features.rows(), data.d());
  for (Index i = 0; i < targets.rows(); ++i)
    targets.row(i) =
        standardize_row(targets_csv.features.row(i).transpose(), params).transpose();
  const std::vector<int> target_classes = model::predict(classifier, targets);

  const io::AttributionFile file = io::load_attributions(options.attributions_path);
  if (file.header.d != data.d())
    throw DimensionMismatch("attribution file d=" + std::to_string(file.header.d) +
                            " does not match dataset d=" + std::to_string(data.d()));
  if (file.scores.rows() < targets.rows())
    throw DimensionMismatch("attribution file covers fewer rows than the targets file");
  if (file.header.dataset_hash != 0 && file.header.dataset_hash != io::dataset_hash(data.rows))
    throw DimensionMismatch("attribution file was produced for a different dataset");

  std::ofstream out(options.out_path.empty() ? "/dev/stdout" : options.out_path);
  if (!out) throw IoError("cannot write " + options.out_path);
  out << "target\tdeletion\tinsertion\n";

  Vector deletion(targets.rows()), insertion(targets.rows());
  eval::EvaluationCurve del_total, ins_total;
  for (Index i = 0; i < targets.rows(); ++i) {
    const AttributionVector attr(file.scores.row(i).transpose(), file.header.method,
                                 file.ids[static_cast<std::size_t>(i)]);
    const AttributionRanking ranking = rank_features(attr);
    const TargetInstance target{targets.row(i).transpose(),
                                target_classes[static_cast<std::size_t>(i)]};
    eval::TrialConfig config;
    config.n_trials = options.trials;
    config.jobs = options.jobs;
    config.seed = derive_seed(options.seed, {static_cast<std::uint64_t>(i), 0});
    const eval::ProtocolResult del =
        eval::run_protocol(classifier, target, ranking, config, false);
    config.seed = derive_seed(options.seed, {static_cast<std::uint64_t>(i), 1});
    const eval::ProtocolResult ins =
        eval::run_protocol(classifier, target, ranking, config, true);
    deletion[i] = del.score;
    insertion[i] = ins.score;
    if (del_total.ys.size() == 0) {
      del_total = del.mean_curve;
      ins_total = ins.mean_curve;
    } else {
      del_total.ys += del.mean_curve.ys;
      ins_total.ys += ins.mean_curve.ys;
    }
    char line[128];
    std::snprintf(line, sizeof(line), "%lld\t%.17g\t%.17g\n", static_cast<long long>(i),
                  del.score, ins.score);
    out << line;
  }
  del_total.ys /= static_cast<double>(targets.rows());
  ins_total.ys /= static_cast<double>(targets.rows());
  char summary[160];
  std::snprintf(summary, sizeof(summary), "mean\t%.17g\t%.17g\n", deletion.mean(),
                insertion.mean());
  out << summary;

  const std::vector<io::NamedCurve> curves = {
      {file.header.method + " deletion", del_total},
      {file.header.method + " insertion", ins_total}};
  if (!options.curves_path.empty()) io::save_curves(options.curves_path, curves);
  if (!options.plot_path.empty()) io::emit_curve_plot(curves, options.plot_path);
  std::cout << "evaluate: deletion=" << deletion.mean() << " insertion=" << insertion.mean()
            << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkOptions {
  std::string data_path, label_column, model_spec = "builtin:logistic";
  std::string methods = "dfax-gaussian,random";
  std::vector<std::string> imports;  // name=path
  std::string out_path, json_path, curves_path, plot_path, timings_path;
  bool no_header = false;
  int n_targets = 100;
  int trials = 100;
  double gamma = 1.0;
  Index map_dim = 2048;
  int psi = 2;
  int trees = 1000;
  int subsets = 64;
  int background = 100;
  int pfi_repeats = 5;
  std::uint64_t seed = 0;
  int jobs = 1;
  EndpointOptions endpoint;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = text.find(',', begin);
    if (end == std::string::npos) {
      if (begin < text.size()) parts.push_back(text.substr(begin));
      break;
    }
    if (end > begin) parts.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
  return parts;
}

int run_benchmark_cmd(const BenchmarkOptions& options) {
  if (options.trials < 1) throw InvalidParameter("--trials must be at least 1");
  if (options.n_targets < 1) throw InvalidParameter("--targets must be at least 1");
  if (options.jobs < 1) throw InvalidParameter("--jobs must be at least 1");
  kde::validate(kde::GaussianKernelParams{options.gamma});
  for (const std::string& name : split_list(options.methods))
    if (name != "dfax-gaussian" && name != "dfax-feature-map" && name != "dfax-sinne" &&
        name != "shapley-sampling" && name != "pfi" && name != "random")
      throw InvalidParameter("unknown method '" + name + "'");

  const io::CsvData csv = io::load_csv(options.data_path, options.label_column,
                                       !options.no_header);
  auto [full_data, params] = standardize(csv.features, csv.feature_names);
  const LabelVector full_labels(csv.labels, csv.num_classes);
  const std::uint64_t full_hash = io::dataset_hash(full_data.rows);

  // Seeded held-out target split, training rows keep their original order.
  const Index n = full_data.n();
  const Index n_targets = std::min<Index>(options.n_targets, n / 2);
  if (n_targets < 1) throw InvalidParameter("need at least 2 rows per target");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto rng = make_rng(derive_seed(options.seed, {0x5EEDu}));
  for (Index i = 0; i < n_targets; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
  }
  std::vector<std::uint8_t> is_target(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n_targets; ++i) is_target[static_cast<std::size_t>(order[i])] = 1;

  Matrix train_rows(n - n_targets, full_data.d());
  std::vector<int> train_labels;
  Matrix target_rows(n_targets, full_data.d());
  Index train_at = 0, target_at = 0;
  for (Index i = 0; i < n; ++i) {
    if (is_target[static_cast<std::size_t>(i)])
      target_rows.row(target_at++) = full_data.rows.row(i);
    else {
      train_rows.row(train_at++) = full_data.rows.row(i);
      train_labels.push_back(full_labels.labels[static_cast<std::size_t>(i)]);
    }
  }

  eval::BenchmarkTask task;
  task.name = options.data_path;
  // The split stays in standardized units, but a subset of rows no longer has
  // exact zero mean / unit std, so the flag is dropped.
  task.data = Dataset(train_rows, full_data.feature_names, /*standardized=*/false,
                      full_data.constant_column);
  const LabelVector train_label_vector(train_labels, full_labels.num_classes);
  const model::ModelHandle classifier = resolve_model(options.model_spec, task.data,
                                                      train_label_vector, options.seed,
                                                      options.endpoint);
  task.preds = model::predict_labels(classifier, task.data.rows);
  task.targets = target_rows;
  task.target_classes = model::predict(classifier, target_rows);
  task.model = &classifier;

  std::vector<eval::MethodSpec> methods;
  for (const std::string& name : split_list(options.methods)) {
    eval::MethodSpec spec;
    spec.name = name;
    if (name == "dfax-gaussian")
      spec.kind = eval::MethodSpec::Kind::DfaxExact;
    else if (name == "dfax-feature-map")
      spec.kind = eval::MethodSpec::Kind::DfaxFeatureMap;
    else if (name == "dfax-sinne")
      spec.kind = eval::MethodSpec::Kind::DfaxSinne;
    else if (name == "shapley-sampling") {
      spec.kind = eval::MethodSpec::Kind::ShapleySampling;
      spec.distribution_supported = false;  // hybrid instances
    } else if (name == "pfi")
      spec.kind = eval::MethodSpec::Kind::Pfi;
    else if (name == "random")
      spec.kind = eval::MethodSpec::Kind::Random;
    else
      throw InvalidParameter("unknown method '" + name + "'");
    spec.dfax.kernel.gamma = options.gamma;
    spec.dfax.map_dimension = options.map_dim;
    spec.dfax.sinne.psi = options.psi;
    spec.dfax.sinne.ensemble_size = options.trees;
    spec.shapley_subsets = options.subsets;
    spec.shapley_background = options.background;
    spec.pfi_repeats = options.pfi_repeats;
    methods.push_back(std::move(spec));
  }
  for (const std::string& import : options.imports) {
    const std::size_t eq = import.find('=');
    if (eq == std::string::npos)
      throw InvalidParameter("--import expects NAME=PATH, got '" + import + "'");
    eval::MethodSpec spec;
    spec.name = import.substr(0, eq);
    spec.kind = eval::MethodSpec::Kind::Imported;
    spec.external = true;
    spec.distribution_supported = false;  // unverifiable for imported scores
    const io::AttributionFile file = io::load_attributions(import.substr(eq + 1));
    if (file.header.d != full_data.d())
      throw DimensionMismatch("imported file d=" + std::to_string(file.header.d) +
                              " does not match dataset d=" + std::to_string(full_data.d()));
    if (file.scores.rows() < n_targets)
      throw DimensionMismatch("imported file has fewer rows than --targets");
    if (file.header.dataset_hash != 0 && file.header.dataset_hash != full_hash)
      throw DimensionMismatch("imported file was produced for a different dataset");
    spec.imported_scores = file.scores;
    methods.push_back(std::move(spec));
  }
  if (methods.empty()) throw InvalidParameter("no methods selected");

  eval::BenchmarkConfig config;
  config.n_trials = options.trials;
  config.seed = options.seed;
  config.jobs = options.jobs;
  const eval::BenchmarkReport report = eval::run_benchmark(methods, {task}, config);

  if (!options.out_path.empty()) io::save_report_tsv(options.out_path, report);
  if (!options.json_path.empty()) io::save_report_json(options.json_path, report);
  if (!options.timings_path.empty()) io::save_timings_tsv(options.timings_path, report);
  if (!options.curves_path.empty() || !options.plot_path.empty()) {
    std::vector<io::NamedCurve> curves;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const auto& cell = report.cell(mi, 0);
      if (!cell.ok) continue;
      curves.push_back({methods[mi].name + " deletion", cell.mean_deletion_curve});
      curves.push_back({methods[mi].name + " insertion", cell.mean_insertion_curve});
    }
    if (!options.curves_path.empty()) io::save_curves(options.curves_path, curves);
    if (!options.plot_path.empty()) io::emit_curve_plot(curves, options.plot_path);
  }

  bool any_ok = false;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const auto& cell = report.cell(mi, 0);
    if (cell.ok) {
      any_ok = true;
      std::cout << methods[mi].name << ": deletion=" << cell.deletion_mean
                << " insertion=" << cell.insertion_mean
                << (report.below_random[mi] ? "  [below random baseline]" : "") << '\n';
    } else {
      std::cout << "warning: " << methods[mi].name << " failed: " << cell.error << '\n';
    }
  }
  if (!any_ok) {
    std::cerr << "error: every benchmark cell failed\n";
    return 4;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// plot

struct PlotOptions {
  std::string curves_path, out_path;
};

int run_plot(const PlotOptions& options) {
  io::emit_curve_plot(io::load_curves(options.curves_path), options.out_path);
  std::cout << "plot: " << options.out_path << '\n';
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ModelUnavailable*>(&e) || dynamic_cast<const InvalidModelOutput*>(&e))
    return 4;
  if (dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const MapMismatch*>(&e) ||
      dynamic_cast<const VersionMismatch*>(&e) || dynamic_cast<const MissingTargetClass*>(&e) ||
      dynamic_cast<const DegenerateComplement*>(&e) ||
      dynamic_cast<const SubsetBlowup*>(&e) || dynamic_cast<const InsufficientSupport*>(&e))
    return 3;
  if (dynamic_cast<const Error*>(&e)) return 2;
  return 1;
}

void add_endpoint_flags(CLI::App* cmd, EndpointOptions* options) {
  cmd->add_option("--endpoint-timeout-ms", options->timeout_ms,
                  "External endpoint timeout in milliseconds")
      ->envname("DFAX_ENDPOINT_TIMEOUT_MS");
  cmd->add_option("--max-batch", options->max_batch, "Maximum rows per endpoint request");
  cmd->add_option("--endpoint-concurrency", options->concurrency,
                  "Concurrent in-flight endpoint requests");
  cmd->add_option("--model-classes", options->model_classes,
                  "Class count of an external model");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DFAX: distribution-based feature attribution toolkit"};
  app.require_subcommand(1);

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit an explainer and write a snapshot");
  fit_cmd->add_option("--data", fit.data_path, "Training CSV")->required();
  fit_cmd->add_option("--label-col", fit.label_column, "Label column (name or index; default last)");
  fit_cmd->add_flag("--no-header", fit.no_header, "CSV has no header row");
  fit_cmd->add_option("--backend", fit.backend, "gaussian | feature-map | sinne");
  fit_cmd->add_option("--gamma", fit.gamma, "Gaussian kernel gamma (default 1)");
  fit_cmd->add_option("--map-dim", fit.map_dim, "Feature map dimension (default 2048)");
  fit_cmd->add_option("--psi", fit.psi, "SiNNE subsample size (default 2)");
  fit_cmd->add_option("--trees", fit.trees, "SiNNE ensemble size (default 1000)");
  fit_cmd->add_option("--model", fit.model_spec,
                      "Classifier for predictions (builtin:logistic, builtin:centroid, "
                      "http://..., exec:...)");
  fit_cmd->add_flag("--use-labels", fit.use_labels,
                    "Partition by the ground-truth labels instead of model predictions");
  fit_cmd->add_option("--seed", fit.seed, "Master seed");
  fit_cmd->add_option("--jobs", fit.jobs, "Worker threads");
  fit_cmd->add_option("--out", fit.out_path, "Snapshot output path")->required();
  add_endpoint_flags(fit_cmd, &fit.endpoint);

  AttributeOptions attr;
  CLI::App* attr_cmd = app.add_subcommand("attribute", "Score targets against a snapshot");
  attr_cmd->add_option("--snapshot", attr.snapshot_path, "Explainer snapshot")->required();
  attr_cmd->add_option("--targets", attr.targets_path, "Targets CSV (same raw units as --data)")
      ->required();
  attr_cmd->add_option("--label-col", attr.label_column, "Label column of the targets CSV");
  attr_cmd->add_flag("--no-header", attr.no_header, "CSV has no header row");
  attr_cmd->add_option("--model", attr.model_spec,
                       "Predict target classes with this model instead of the label column");
  attr_cmd->add_option("--top-k", attr.top_k, "Print the k most important feature names");
  attr_cmd->add_option("--jobs", attr.jobs, "Worker threads");
  attr_cmd->add_option("--out", attr.out_path, "Attribution file output")->required();
  add_endpoint_flags(attr_cmd, &attr.endpoint);

  EvaluateOptions eval_options;
  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "Deletion/insertion scores for an attribution file");
  eval_cmd->add_option("--data", eval_options.data_path, "Training CSV")->required();
  eval_cmd->add_option("--label-col", eval_options.label_column, "Label column");
  eval_cmd->add_flag("--no-header", eval_options.no_header, "CSV has no header row");
  eval_cmd->add_option("--model", eval_options.model_spec, "Classifier (default builtin:logistic)");
  eval_cmd->add_option("--targets", eval_options.targets_path, "Targets CSV")->required();
  eval_cmd->add_option("--attributions", eval_options.attributions_path, "Attribution file")
      ->required();
  eval_cmd->add_option("--trials", eval_options.trials, "Random trials per instance");
  eval_cmd->add_option("--seed", eval_options.seed, "Master seed");
  eval_cmd->add_option("--jobs", eval_options.jobs, "Worker threads");
  eval_cmd->add_option("--out", eval_options.out_path, "Per-target score table");
  eval_cmd->add_option("--curves-out", eval_options.curves_path, "Mean curve TSV");
  eval_cmd->add_option("--plot", eval_options.plot_path, "Curve SVG");
  add_endpoint_flags(eval_cmd, &eval_options.endpoint);

  BenchmarkOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("benchmark", "Compare attribution methods");
  bench_cmd->add_option("--data", bench.data_path, "Dataset CSV")->required();
  bench_cmd->add_option("--label-col", bench.label_column, "Label column");
  bench_cmd->add_flag("--no-header", bench.no_header, "CSV has no header row");
  bench_cmd->add_option("--model", bench.model_spec, "Classifier (default builtin:logistic)");
  bench_cmd->add_option("--methods", bench.methods,
                        "Comma list: dfax-gaussian,dfax-feature-map,dfax-sinne,"
                        "shapley-sampling,pfi,random");
  bench_cmd->add_option("--import", bench.imports,
                        "Imported third-party scores as NAME=PATH (repeatable)");
  bench_cmd->add_option("--targets", bench.n_targets, "Held-out target count (default 100)");
  bench_cmd->add_option("--trials", bench.trials, "Random trials per instance (default 100)");
  bench_cmd->add_option("--gamma", bench.gamma, "Gaussian kernel gamma");
  bench_cmd->add_option("--map-dim", bench.map_dim, "Feature map dimension");
  bench_cmd->add_option("--psi", bench.psi, "SiNNE subsample size");
  bench_cmd->add_option("--trees", bench.trees, "SiNNE ensemble size");
  bench_cmd->add_option("--subsets", bench.subsets, "Shapley sampling subset count");
  bench_cmd->add_option("--background", bench.background, "Shapley background rows");
  bench_cmd->add_option("--pfi-repeats", bench.pfi_repeats, "PFI permutation repeats");
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads");
  bench_cmd->add_option("--out", bench.out_path, "Report TSV");
  bench_cmd->add_option("--json", bench.json_path, "Report JSON");
  bench_cmd->add_option("--curves-out", bench.curves_path, "Mean curve TSV");
  bench_cmd->add_option("--plot", bench.plot_path, "Curve SVG");
  bench_cmd->add_option("--timings-out", bench.timings_path,
                        "Wall-clock sidecar (not byte-reproducible)");
  add_endpoint_flags(bench_cmd, &bench.endpoint);

  PlotOptions plot;
  CLI::App* plot_cmd = app.add_subcommand("plot", "Render a curve TSV as SVG");
  plot_cmd->add_option("--curves", plot.curves_path, "Curve TSV")->required();
  plot_cmd->add_option("--out", plot.out_path, "SVG output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit);
    if (attr_cmd->parsed()) return run_attribute(attr);
    if (eval_cmd->parsed()) return run_evaluate(eval_options);
    if (bench_cmd->parsed()) return run_benchmark_cmd(bench);
    if (plot_cmd->parsed()) return run_plot(plot);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 2;
}
