#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfax/eval.hpp"
#include "dfax/explainer.hpp"
#include "dfax/standardize.hpp"
#include "dfax/types.hpp"

namespace dfax::io {

// ---------------------------------------------------------------------------
// CSV ingestion

struct CsvData {
  Matrix features;
  std::vector<std::string> feature_names;
  std::vector<int> labels;
  std::vector<std::string> label_names;  // dense id -> original label string
  int num_classes = 0;
};

// Comma-separated numeric table with one label column. `label_column` may be
// a header name, a 0-based column index, or empty for the last column.
// Feature cells must parse as finite numbers (locale-independent); string
// labels are mapped to dense integers, numerically when every label is an
// integer and lexicographically otherwise.
CsvData load_csv(const std::string& path, const std::string& label_column = "",
                 bool has_header = true);

// Writes features + label column with round-trip (17 significant digit)
// precision. Used by fixtures and tests.
void save_csv(const std::string& path, const Matrix& features,
              const std::vector<std::string>& feature_names, const std::vector<int>& labels,
              const std::string& label_name = "label");

// FNV-1a over the dimensions and raw row-major bytes; detects any single
// cell mutation of the source data.
std::uint64_t dataset_hash(const Matrix& rows);

// ---------------------------------------------------------------------------
// Attribution files (also the import path for third-party scores)

struct AttributionFileHeader {
  std::string method;
  std::uint64_t dataset_hash = 0;
  Index d = 0;
  std::uint64_t seed = 0;
  bool distribution_supported = true;
  std::string source = "builtin";  // "external" for imported score tables
};

struct AttributionFile {
  AttributionFileHeader header;
  std::vector<std::string> ids;  // one per row
  Matrix scores;                 // rows x d
};

void save_attributions(const std::string& path, const AttributionFile& file,
                       const std::vector<std::string>& feature_names);
AttributionFile load_attributions(const std::string& path);

// ---------------------------------------------------------------------------
// Explainer snapshots (versioned binary)

struct ExplainerSnapshot {
  DfaxExplainer explainer;
  StandardizationParams standardization;
  std::vector<std::string> label_names;  // dense class id -> original label
  std::uint64_t dataset_hash = 0;
};

void save_explainer(const std::string& path, const ExplainerSnapshot& snapshot);
ExplainerSnapshot load_explainer(const std::string& path);

// ---------------------------------------------------------------------------
// Curves and plots

struct NamedCurve {
  std::string label;
  eval::EvaluationCurve curve;
};

void save_curves(const std::string& path, const std::vector<NamedCurve>& curves);
std::vector<NamedCurve> load_curves(const std::string& path);

// Deterministic SVG: [0,1]^2 axes, one polyline per curve, per-curve AUC
// annotations with three decimals. Identical inputs produce identical bytes.
void emit_curve_plot(const std::vector<NamedCurve>& curves, const std::string& path);

// ---------------------------------------------------------------------------
// Benchmark reports

// The TSV/JSON reports carry only deterministic content (scores, ranks,
// flags); wall-clock timings go to their own sidecar because they never
// reproduce byte-for-byte.
void save_report_tsv(const std::string& path, const eval::BenchmarkReport& report);
void save_report_json(const std::string& path, const eval::BenchmarkReport& report);
void save_timings_tsv(const std::string& path, const eval::BenchmarkReport& report);

}  // namespace dfax::io
