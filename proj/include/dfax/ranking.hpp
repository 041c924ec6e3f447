#pragma once

#include "dfax/types.hpp"

namespace dfax {

// Feature indices sorted by score descending. Ties break by ascending
// feature index, so rankings are deterministic.
AttributionRanking rank_features(const AttributionVector& attr);

}  // namespace dfax
