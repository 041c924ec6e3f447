#include "dfax/instrumentation.hpp"

#include <atomic>

namespace dfax::instrumentation {

namespace {
std::atomic<std::int64_t> g_classifier_queries{0};
std::atomic<std::int64_t> g_synthesized_rows{0};
}  // namespace

std::int64_t classifier_queries() noexcept { return g_classifier_queries.load(); }
std::int64_t synthesized_rows() noexcept { return g_synthesized_rows.load(); }

void note_classifier_queries(std::int64_t k) noexcept { g_classifier_queries += k; }
void note_synthesized_rows(std::int64_t k) noexcept { g_synthesized_rows += k; }

void reset() noexcept {
  g_classifier_queries = 0;
  g_synthesized_rows = 0;
}

}  // namespace dfax::instrumentation
