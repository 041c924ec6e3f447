#include "dfax/model.hpp"

#include <cmath>

#include "dfax/instrumentation.hpp"
#include "dfax/model_client.hpp"

namespace dfax::model {

BuiltinKind builtin_from_name(const std::string& name) {
  if (name == "logistic") return BuiltinKind::Logistic;
  if (name == "centroid" || name == "nearest-centroid") return BuiltinKind::NearestCentroid;
  throw InvalidParameter("unknown builtin model '" + name + "' (use logistic | centroid)");
}

std::string builtin_name(BuiltinKind kind) {
  return kind == BuiltinKind::Logistic ? "logistic" : "centroid";
}

ModelHandle ModelHandle::external(const EndpointDescriptor& endpoint, int num_classes,
                                  Index dim) {
  if (num_classes < 1 || dim < 1) throw InvalidParameter("external model needs m >= 1, d >= 1");
  if (endpoint.max_batch < 1) throw InvalidParameter("max_batch must be at least 1");
  ModelHandle handle;
  handle.num_classes = num_classes;
  handle.dim = dim;
  handle.impl = std::make_shared<ExternalClient>(endpoint, num_classes, dim);
  return handle;
}

ModelHandle ModelHandle::stub(int num_classes, Index dim,
                              std::function<Vector(const Vector&)> probability_fn) {
  ModelHandle handle;
  handle.num_classes = num_classes;
  handle.dim = dim;
  handle.impl = StubModel{std::move(probability_fn)};
  return handle;
}

bool ModelHandle::is_external() const {
  return std::holds_alternative<std::shared_ptr<ExternalClient>>(impl);
}

namespace {

// Row-wise softmax with max subtraction.
Matrix softmax_rows(Matrix logits) {
  for (Index i = 0; i < logits.rows(); ++i) {
    const double peak = logits.row(i).maxCoeff();
    logits.row(i) = (logits.row(i).array() - peak).exp();
    logits.row(i) /= logits.row(i).sum();
  }
  return logits;
}

Matrix one_hot(const LabelVector& labels) {
  Matrix y = Matrix::Zero(labels.n(), labels.num_classes);
  for (Index i = 0; i < labels.n(); ++i)
    y(i, labels.labels[static_cast<std::size_t>(i)]) = 1.0;
  return y;
}

LogisticModel train_logistic(const Dataset& data, const LabelVector& labels) {
  constexpr int kIterations = 500;
  constexpr double kStepSize = 0.5;
  const Index n = data.n(), d = data.d();
  const int m = labels.num_classes;

  LogisticModel model;
  model.weights = Matrix::Zero(m, d);
  model.bias = Vector::Zero(m);
  model.loss_history.reserve(kIterations);

  const Matrix targets = one_hot(labels);
  for (int iter = 0; iter < kIterations; ++iter) {
    Matrix logits = data.rows * model.weights.transpose();
    logits.rowwise() += model.bias.transpose();
    const Matrix probs = softmax_rows(std::move(logits));

    double loss = 0.0;
    for (Index i = 0; i < n; ++i)
      loss -= std::log(std::max(probs(i, labels.labels[static_cast<std::size_t>(i)]), 1e-300));
    model.loss_history.push_back(loss / static_cast<double>(n));

    const Matrix residual = (probs - targets) / static_cast<double>(n);  // n x m
    model.weights -= kStepSize * (residual.transpose() * data.rows);
    model.bias -= kStepSize * residual.colwise().sum().transpose();
  }
  return model;
}

CentroidModel train_centroid(const Dataset& data, const LabelVector& labels) {
  const int m = labels.num_classes;
  CentroidModel model;
  model.centroids = Matrix::Zero(m, data.d());
  Vector counts = Vector::Zero(m);
  for (Index i = 0; i < data.n(); ++i) {
    const int c = labels.labels[static_cast<std::size_t>(i)];
    model.centroids.row(c) += data.rows.row(i);
    counts[c] += 1.0;
  }
  for (int c = 0; c < m; ++c) model.centroids.row(c) /= counts[c];
  return model;
}

}  // namespace

ModelHandle train_builtin(BuiltinKind kind, const Dataset& data, const LabelVector& labels,
                          std::uint64_t seed) {
  (void)seed;  // both builtins are seed-free deterministic
  if (labels.n() != data.n())
    throw DimensionMismatch("label count does not match dataset rows");
  if (data.n() < labels.num_classes)
    throw InsufficientClasses("need at least one row per class");
  std::vector<Index> counts(static_cast<std::size_t>(labels.num_classes), 0);
  for (int y : labels.labels) ++counts[static_cast<std::size_t>(y)];
  for (int c = 0; c < labels.num_classes; ++c)
    if (counts[static_cast<std::size_t>(c)] == 0)
      throw InsufficientClasses("class " + std::to_string(c) + " has no training rows");

  ModelHandle handle;
  handle.num_classes = labels.num_classes;
  handle.dim = data.d();
  if (kind == BuiltinKind::Logistic)
    handle.impl = train_logistic(data, labels);
  else
    handle.impl = train_centroid(data, labels);
  return handle;
}

Matrix predict_proba(const ModelHandle& model, const Matrix& rows) {
  if (rows.cols() != model.dim)
    throw DimensionMismatch("instances have " + std::to_string(rows.cols()) +
                            " features, model expects " + std::to_string(model.dim));
  dfax::detail::require_finite(rows, "prediction input");
  instrumentation::note_classifier_queries(rows.rows());

  if (const auto* logistic = std::get_if<LogisticModel>(&model.impl)) {
    Matrix logits = rows * logistic->weights.transpose();
    logits.rowwise() += logistic->bias.transpose();
    return softmax_rows(std::move(logits));
  }
  if (const auto* centroid = std::get_if<CentroidModel>(&model.impl)) {
    Matrix logits(rows.rows(), model.num_classes);
    for (Index i = 0; i < rows.rows(); ++i)
      for (int c = 0; c < model.num_classes; ++c)
        logits(i, c) = -(rows.row(i) - centroid->centroids.row(c)).squaredNorm();
    return softmax_rows(std::move(logits));
  }
  if (const auto* stub = std::get_if<StubModel>(&model.impl)) {
    Matrix probs(rows.rows(), model.num_classes);
    for (Index i = 0; i < rows.rows(); ++i) {
      const Vector p = stub->probability_fn(rows.row(i).transpose());
      if (p.size() != model.num_classes)
        throw InvalidModelOutput("stub returned a probability vector of the wrong width");
      probs.row(i) = p.transpose();
    }
    return probs;
  }
  const auto& client = std::get<std::shared_ptr<ExternalClient>>(model.impl);
  return client->predict_proba(rows);
}

std::vector<int> predict(const ModelHandle& model, const Matrix& rows) {
  const Matrix probs = predict_proba(model, rows);
  std::vector<int> out(static_cast<std::size_t>(rows.rows()));
  for (Index i = 0; i < probs.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < model.num_classes; ++c)
      if (probs(i, c) > probs(i, best)) best = c;
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

LabelVector predict_labels(const ModelHandle& model, const Matrix& rows) {
  return LabelVector(predict(model, rows), model.num_classes);
}

}  // namespace dfax::model
