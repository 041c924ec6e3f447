#pragma once

#include <stdexcept>
#include <string>

namespace dfax {

// Base class for every error the toolkit raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data contains non-finite values or violates a basic shape constraint.
struct InvalidData : Error { using Error::Error; };

// A hyperparameter is outside its admissible range.
struct InvalidParameter : Error { using Error::Error; };

// Vector/matrix dimensions disagree between two coupled objects.
struct DimensionMismatch : Error { using Error::Error; };

// A density estimator was asked to fit or evaluate an empty support set.
struct EmptySupport : Error { using Error::Error; };

// A kernel mean map was paired with a feature map of another dimension.
struct MapMismatch : Error { using Error::Error; };

// SiNNE fitting needs at least psi support points.
struct InsufficientSupport : Error { using Error::Error; };

struct EmptyDataset : Error { using Error::Error; };

// The target's predicted class has no rows in the fitted partition.
struct MissingTargetClass : Error { using Error::Error; };

// The complement of the target class is empty (single-class predictions).
struct DegenerateComplement : Error { using Error::Error; };

// Exact Shapley enumeration rejected: 2^d subsets would be evaluated.
struct SubsetBlowup : Error { using Error::Error; };

// The external model endpoint failed, timed out, or broke protocol.
struct ModelUnavailable : Error { using Error::Error; };

// A model returned non-finite or non-normalized probabilities.
struct InvalidModelOutput : Error { using Error::Error; };

// Training data lacks at least one row per class.
struct InsufficientClasses : Error { using Error::Error; };

// A deletion/insertion trial aborted because the model failed mid-curve.
struct TrialFailed : Error { using Error::Error; };

// Text parsing failure; message carries line (and column) context.
struct ParseError : Error { using Error::Error; };

struct DeserializeError : Error { using Error::Error; };

struct VersionMismatch : Error { using Error::Error; };

struct IoError : Error { using Error::Error; };

}  // namespace dfax
