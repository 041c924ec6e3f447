#include "dfax/ranking.hpp"

#include <algorithm>
#include <numeric>

namespace dfax {

AttributionRanking rank_features(const AttributionVector& attr) {
  if (!attr.scores.allFinite()) throw InvalidData("cannot rank non-finite scores");
  std::vector<Index> order(static_cast<std::size_t>(attr.scores.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (attr.scores[a] != attr.scores[b]) return attr.scores[a] > attr.scores[b];
    return a < b;
  });
  return AttributionRanking(std::move(order));
}

}  // namespace dfax
