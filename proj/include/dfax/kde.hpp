#pragma once

#include <cstdint>

#include "dfax/types.hpp"

namespace dfax::kde {

// Parameters of the point kernel exp(-gamma * (x - y)^2), gamma = 1/(2 sigma^2).
// The kernel is used unnormalized: downstream attribution consumes the
// difference of two same-kernel estimates, so a common positive scale would
// cancel from every ranking. Densities here therefore live in (0, 1].
struct GaussianKernelParams {
  double gamma = 1.0;
};

void validate(const GaussianKernelParams& params);

double gaussian_kernel(double x, double y, const GaussianKernelParams& params);

// One-dimensional kernel density estimate over an explicit support set:
// the arithmetic mean of the point kernel between the query and every
// support point.
struct ExactKde1D {
  Vector support_points;
  GaussianKernelParams params;
};

ExactKde1D make_exact_kde(Vector support_points, GaussianKernelParams params);

double exact_density(const ExactKde1D& kde, double query);

// Finite trigonometric feature map approximating the Gaussian point kernel.
//
// The kernel is the Fourier transform of a Gaussian spectral density,
//   exp(-g (x-y)^2) = E_{w ~ N(0, 2g)} [ cos(w (x - y)) ],
// discretized on an equispaced frequency lattice with a seeded random shift
// u: node k sits at (k/2 + u) * h for even k and (k/2 + 1 - u) * h for odd
// k, carrying the quadrature weight of the spectral density there. Component
// 2k of the map is sqrt(w_k) cos(freq_k x) and component 2k+1 is
// sqrt(w_k) sin(freq_k x) (the final sine is dropped when the dimension is
// odd). Inner products of mapped points reproduce the kernel to near machine
// precision as long as the query-to-support distance stays well below
// pi / freq_step; with the default dimension this covers hundreds of
// standardized units at gamma = 1. Very large gamma narrows that window, so
// raise the dimension along with gamma.
struct FeatureMap1D {
  Index dimension = 0;  // D: length of a mapped vector
  std::uint64_t seed = 0;
  GaussianKernelParams params;
  double freq_step = 0.0;  // lattice spacing h
  double shift = 0.0;      // random shift u in [0, 1)
  Vector frequencies;      // ceil(D / 2) lattice nodes
  Vector weight_sqrt;      // sqrt of the quadrature weight per node
};

FeatureMap1D build_feature_map(const GaussianKernelParams& params, Index dimension,
                               std::uint64_t seed);

// Maps a scalar to its D-dimensional feature vector.
Vector map_point(const FeatureMap1D& map, double x);
void map_point_into(const FeatureMap1D& map, double x, Eigen::Ref<Vector> out);

// Componentwise mean of the feature map over a support set. Precomputing it
// turns every later density query into a single O(D) inner product.
struct KernelMeanMap1D {
  Vector mean_vector;
  Index count = 0;
};

KernelMeanMap1D mean_map(const FeatureMap1D& map, const Vector& support_points);

// <map(query), mean_vector>; cost independent of the support size. May land
// slightly outside (0, 1]; callers that need a density clamp to [0, 1].
double approx_density(const KernelMeanMap1D& mm, const FeatureMap1D& map, double query);

}  // namespace dfax::kde
