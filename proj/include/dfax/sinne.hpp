#pragma once

#include <cstdint>

#include "dfax/types.hpp"

namespace dfax::sinne {

// Ensemble controls: each of the `ensemble_size` members is built from a
// seeded subsample of `psi` support points drawn without replacement.
struct SinneParams {
  int psi = 2;
  int ensemble_size = 1000;
  std::uint64_t seed = 0;
};

void validate(const SinneParams& params);

// One-dimensional isolation-style density ensemble. Every member holds psi
// closed balls, one per subsampled point, with radius equal to the distance
// to the point's nearest neighbour within the subsample. Duplicated values
// yield radius-0 balls; they are counted rather than resampled so fitting
// stays deterministic.
struct SinneModel1D {
  Matrix centers;  // ensemble_size x psi
  Matrix radii;    // ensemble_size x psi
  std::int64_t zero_radius_balls = 0;

  Index members() const { return centers.rows(); }
  Index balls_per_member() const { return centers.cols(); }
};

SinneModel1D fit_sinne(const Vector& support_points, const SinneParams& params);

// Fraction of members covering the query, i.e. members with at least one
// ball satisfying |query - center| <= radius. Higher means denser, matching
// the orientation the attribution score requires.
double sinne_density(const SinneModel1D& model, double query);

}  // namespace dfax::sinne
