#include "dfax/sinne.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "dfax/rng.hpp"

namespace dfax::sinne {

void validate(const SinneParams& params) {
  if (params.psi < 2) throw InvalidParameter("psi must be at least 2");
  if (params.ensemble_size < 1) throw InvalidParameter("ensemble size must be at least 1");
}

SinneModel1D fit_sinne(const Vector& support_points, const SinneParams& params) {
  validate(params);
  const Index n = support_points.size();
  if (n < params.psi)
    throw InsufficientSupport("support of size " + std::to_string(n) +
                              " is smaller than psi = " + std::to_string(params.psi));
  detail::require_finite(support_points, "SiNNE support");

  SinneModel1D model;
  model.centers.resize(params.ensemble_size, params.psi);
  model.radii.resize(params.ensemble_size, params.psi);

  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});

  for (int member = 0; member < params.ensemble_size; ++member) {
    auto rng = make_rng(derive_seed(params.seed, {static_cast<std::uint64_t>(member)}));
    // Partial Fisher-Yates: the first psi slots become the subsample.
    for (int i = 0; i < params.psi; ++i) {
      std::uniform_int_distribution<Index> pick(i, n - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
      model.centers(member, i) = support_points[pool[static_cast<std::size_t>(i)]];
    }
    for (int i = 0; i < params.psi; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (int j = 0; j < params.psi; ++j) {
        if (j == i) continue;
        nearest = std::min(nearest, std::abs(model.centers(member, i) - model.centers(member, j)));
      }
      model.radii(member, i) = nearest;
      if (nearest == 0.0) ++model.zero_radius_balls;
    }
  }
  return model;
}

double sinne_density(const SinneModel1D& model, double query) {
  const Index t = model.members();
  const Index psi = model.balls_per_member();
  Index covered = 0;
  for (Index member = 0; member < t; ++member) {
    for (Index i = 0; i < psi; ++i) {
      if (std::abs(query - model.centers(member, i)) <= model.radii(member, i)) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(t);
}

}  // namespace dfax::sinne
