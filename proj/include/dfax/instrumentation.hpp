#pragma once

#include <cstdint>

// Audit counters backing the no-out-of-distribution guarantee.
//
// Fitting an explainer and computing attributions must touch neither the
// classifier nor any fabricated instance: predict_proba bumps
// classifier_queries for every row it scores, and each code path that
// manufactures rows (masking in the evaluation protocol, hybrid instances in
// sampling-based Shapley, column permutations in PFI) bumps synthesized_rows.
// Tests reset the counters, run fit/attribute, and assert both stayed zero.
namespace dfax::instrumentation {

std::int64_t classifier_queries() noexcept;
std::int64_t synthesized_rows() noexcept;

void note_classifier_queries(std::int64_t k) noexcept;
void note_synthesized_rows(std::int64_t k) noexcept;

void reset() noexcept;

}  // namespace dfax::instrumentation
