#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dfax/types.hpp"

namespace dfax::model {

enum class Transport { Http, Subprocess };

// How to reach an external black-box model. HTTP endpoints receive a POST to
// /predict; subprocess commands speak one JSON document per line on their
// standard streams. Both carry the same request/response schema:
//   {"id": <int>, "instances": [[f64; d]; k]}
//   {"id": <int>, "probabilities": [[f64; m]; k]}
struct EndpointDescriptor {
  Transport transport = Transport::Http;
  std::string target;  // base URL (http://host:port) or shell command
  int timeout_ms = 30000;
  int max_batch = 128;
  int max_retries = 2;
  int concurrency = 1;  // concurrent in-flight requests (HTTP only)
};

enum class BuiltinKind { Logistic, NearestCentroid };

BuiltinKind builtin_from_name(const std::string& name);
std::string builtin_name(BuiltinKind kind);

struct LogisticModel {
  Matrix weights;  // m x d
  Vector bias;     // m
  std::vector<double> loss_history;
};

struct CentroidModel {
  Matrix centroids;  // m x d
};

// Test-double model: an arbitrary probability function over instances.
struct StubModel {
  std::function<Vector(const Vector&)> probability_fn;
};

class ExternalClient;  // transport implementation, owns connections

// Classifier access point for the harness. Built-in models are immutable and
// shareable after training; the external client serializes its traffic.
struct ModelHandle {
  int num_classes = 0;
  Index dim = 0;
  std::variant<LogisticModel, CentroidModel, StubModel,
               std::shared_ptr<ExternalClient>> impl;

  static ModelHandle external(const EndpointDescriptor& endpoint, int num_classes, Index dim);
  static ModelHandle stub(int num_classes, Index dim,
                          std::function<Vector(const Vector&)> probability_fn);
  bool is_external() const;
};

// Trains a built-in classifier. The logistic variant runs full-batch
// gradient descent at a fixed step size (0.5) for a fixed 500 iterations;
// nearest-centroid has no tunables. Both are deterministic for a given seed.
ModelHandle train_builtin(BuiltinKind kind, const Dataset& data, const LabelVector& labels,
                          std::uint64_t seed);

// k x m class probabilities; every row sums to 1 within 1e-6. External calls
// are chunked at max_batch and reassembled in request order.
Matrix predict_proba(const ModelHandle& model, const Matrix& rows);

// Argmax of predict_proba per row; ties resolve to the lowest class index.
std::vector<int> predict(const ModelHandle& model, const Matrix& rows);

LabelVector predict_labels(const ModelHandle& model, const Matrix& rows);

}  // namespace dfax::model
