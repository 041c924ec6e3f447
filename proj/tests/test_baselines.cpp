#include <doctest.h>

#include <bit>
#include <cmath>
#include <numeric>

#include "dfax/baselines.hpp"
#include "dfax/instrumentation.hpp"
#include "dfax/ranking.hpp"
#include "fixtures.hpp"

using namespace dfax;
using namespace dfax::baselines;

namespace {

double binomial(int n, int k) {
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result *= static_cast<double>(n - i + 1) / i;
  return result;
}

// Test-local factorial-based weight, independent of the library's recurrence.
double weight_oracle(int subset_size, int d) {
  const auto factorial = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return factorial(subset_size) * factorial(d - subset_size - 1) / factorial(d);
}

// Brute-force Shapley: per feature, literal sum over subsets of A \ {s}.
Vector shapley_bruteforce(const SubsetEvaluator& evaluator, const TargetInstance& target,
                          Index d) {
  Vector scores = Vector::Zero(d);
  for (Index s = 0; s < d; ++s) {
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      if (mask & (1u << s)) continue;
      std::vector<std::uint8_t> without(static_cast<std::size_t>(d), 0);
      for (Index j = 0; j < d; ++j)
        if (mask & (1u << j)) without[static_cast<std::size_t>(j)] = 1;
      std::vector<std::uint8_t> with = without;
      with[static_cast<std::size_t>(s)] = 1;
      total += weight_oracle(std::popcount(mask), static_cast<int>(d)) *
               (evaluator(with, target) - evaluator(without, target));
    }
    scores[s] = total;
  }
  return scores;
}

std::pair<Dataset, LabelVector> small_fixture(Index n, Index d, std::uint64_t seed) {
  Matrix rows = fixtures::random_matrix(n, d, seed);
  std::vector<int> labels;
  for (Index i = 0; i < n; ++i) labels.push_back(rows(i, 0) + 0.3 * rows(i, d - 1) > 0 ? 1 : 0);
  return {Dataset(rows, Dataset::default_names(d), false), LabelVector(labels, 2)};
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("shapley weights normalize over the power set") {
  for (Index d = 1; d <= 15; ++d) {
    const ShapleyWeights weights = ShapleyWeights::for_dim(d);
    double total = 0.0;
    for (Index k = 0; k < d; ++k)
      total += binomial(static_cast<int>(d) - 1, static_cast<int>(k)) *
               weights.by_size[static_cast<std::size_t>(k)];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (Index k = 0; k < d; ++k)
      CHECK(weights.by_size[static_cast<std::size_t>(k)] ==
            doctest::Approx(weight_oracle(static_cast<int>(k), static_cast<int>(d)))
                .epsilon(1e-12));
  }
}

TEST_CASE("single feature reduces to F_{s} minus F_empty") {
  auto [data, labels] = small_fixture(30, 1, 3);
  const RetrainEvaluator evaluator(model::BuiltinKind::NearestCentroid, data, labels, 0);
  const TargetInstance target{data.rows.row(0).transpose(), labels.labels[0]};
  const AttributionVector attr = shapley_exact(data, labels, target, evaluator);
  const double full = evaluator({1}, target);
  const double empty = evaluator({0}, target);
  CHECK(attr.scores[0] == doctest::Approx(full - empty).epsilon(1e-12));
}

TEST_CASE("exact shapley matches the brute-force oracle on d=3") {
  auto [data, labels] = small_fixture(40, 3, 7);
  const RetrainEvaluator evaluator(model::BuiltinKind::NearestCentroid, data, labels, 0);
  const TargetInstance target{data.rows.row(2).transpose(), labels.labels[2]};
  const AttributionVector attr = shapley_exact(data, labels, target, evaluator);
  const Vector oracle = shapley_bruteforce(evaluator, target, 3);
  CHECK((attr.scores - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("efficiency: scores sum to F_full minus F_empty") {
  auto [data, labels] = small_fixture(25, 5, 11);
  const RetrainEvaluator evaluator(model::BuiltinKind::NearestCentroid, data, labels, 0);
  const TargetInstance target{data.rows.row(1).transpose(), labels.labels[1]};
  const AttributionVector attr = shapley_exact(data, labels, target, evaluator);
  const double full = evaluator(std::vector<std::uint8_t>(5, 1), target);
  const double empty = evaluator(std::vector<std::uint8_t>(5, 0), target);
  CHECK(attr.scores.sum() == doctest::Approx(full - empty).epsilon(1e-9));
}

TEST_CASE("identical columns earn identical scores") {
  Matrix rows = fixtures::random_matrix(30, 3, 13);
  rows.col(2) = rows.col(0);
  std::vector<int> labels;
  for (Index i = 0; i < 30; ++i) labels.push_back(rows(i, 0) > 0 ? 1 : 0);
  const Dataset data(rows, Dataset::default_names(3), false);
  const LabelVector label_vector(labels, 2);
  const RetrainEvaluator evaluator(model::BuiltinKind::NearestCentroid, data, label_vector, 0);
  const TargetInstance target{data.rows.row(4).transpose(), labels[4]};
  const AttributionVector attr = shapley_exact(data, label_vector, target, evaluator);
  CHECK(attr.scores[0] == doctest::Approx(attr.scores[2]).epsilon(1e-9));
}

TEST_CASE("a constant column is a dummy feature with zero score") {
  // Exactly balanced classes: the empty-set value (class frequency) then
  // coincides with the tied-centroid value of constant-only subsets, so the
  // dummy contributes nothing anywhere in the power set.
  Matrix rows = fixtures::random_matrix(30, 3, 17);
  std::vector<int> labels;
  for (Index i = 0; i < 30; ++i) {
    const int cls = i % 2;
    rows(i, 0) = (cls ? 1.0 : -1.0) + 0.2 * rows(i, 0);
    labels.push_back(cls);
  }
  rows.col(1).setConstant(2.0);
  const Dataset data(rows, Dataset::default_names(3), false);
  const LabelVector label_vector(labels, 2);
  const RetrainEvaluator evaluator(model::BuiltinKind::NearestCentroid, data, label_vector, 0);
  const TargetInstance target{data.rows.row(0).transpose(), labels[0]};
  const AttributionVector attr = shapley_exact(data, label_vector, target, evaluator);
  CHECK(std::abs(attr.scores[1]) < 1e-9);
}

TEST_CASE("dimension guard points to the sampling variant") {
  Matrix rows = fixtures::random_matrix(4, 16, 19);
  const Dataset data(rows, Dataset::default_names(16), false);
  const LabelVector labels({0, 0, 1, 1}, 2);
  const RetrainEvaluator evaluator(model::BuiltinKind::NearestCentroid, data, labels, 0);
  CHECK_THROWS_AS(
      shapley_exact(data, labels, {data.rows.row(0).transpose(), 0}, evaluator),
      SubsetBlowup);
}

TEST_CASE("full-enumeration sampling equals exact marginal shapley at d=4") {
  auto [data, labels] = small_fixture(24, 4, 23);
  const model::ModelHandle handle =
      model::train_builtin(model::BuiltinKind::Logistic, data, labels, 0);
  const TargetInstance target{data.rows.row(3).transpose(), labels.labels[3]};

  // Full enumeration over all 2^4 subsets against the full dataset.
  const AttributionVector sampled = shapley_sampling(data, labels, target, handle,
                                                     /*n_subsets=*/8, /*n_background=*/1000, 5);

  // Independent oracle: same marginal value function, literal subset loop.
  const Matrix& rows = data.rows;  // plain ref: bindings are not capturable everywhere
  Vector oracle = Vector::Zero(4);
  for (Index s = 0; s < 4; ++s) {
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
      if (mask & (1u << s)) continue;
      const auto marginal_value = [&](std::uint32_t subset) {
        Matrix hybrids = rows;
        for (Index j = 0; j < 4; ++j)
          if (subset & (1u << j)) hybrids.col(j).setConstant(target.values[j]);
        return model::predict_proba(handle, hybrids).col(target.predicted_class).mean();
      };
      total += weight_oracle(std::popcount(mask), 4) *
               (marginal_value(mask | (1u << s)) - marginal_value(mask));
    }
    oracle[s] = total;
  }
  CHECK((sampled.scores - oracle).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("exact shapley over the marginal evaluator equals full-enumeration sampling") {
  auto [data, labels] = small_fixture(20, 3, 71);
  const model::ModelHandle handle =
      model::train_builtin(model::BuiltinKind::Logistic, data, labels, 0);
  const TargetInstance target{data.rows.row(1).transpose(), labels.labels[1]};

  // Both routes share the marginal value function; with the background fixed
  // to the full dataset they must agree to rounding.
  const MarginalEvaluator evaluator(data.rows, handle);
  const AttributionVector via_exact = shapley_exact(data, labels, target, evaluator);
  const AttributionVector via_sampling =
      shapley_sampling(data, labels, target, handle, /*n_subsets=*/4, /*n_background=*/1000, 9);
  CHECK((via_exact.scores - via_sampling.scores).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("a feature the model ignores samples to zero") {
  auto [data, labels] = small_fixture(60, 3, 29);
  Vector weights(3);
  weights << 1.0, -0.5, 0.0;  // feature 2 is ignored
  const model::ModelHandle handle = model::ModelHandle::stub(2, 3, [weights](const Vector& x) {
    const double p = 1.0 / (1.0 + std::exp(-weights.dot(x)));
    Vector out(2);
    out << 1.0 - p, p;
    return out;
  });
  const TargetInstance target{data.rows.row(0).transpose(), 1};
  const AttributionVector attr =
      shapley_sampling(data, labels, target, handle, 64, 40, 31);
  CHECK(std::abs(attr.scores[2]) <= 0.02);
}

TEST_CASE("sampling handles dimensions beyond the mask width") {
  const Index d = 40;
  Matrix rows = fixtures::random_matrix(50, d, 73);
  std::vector<int> labels;
  for (Index i = 0; i < 50; ++i) labels.push_back(rows(i, 0) > 0 ? 1 : 0);
  const Dataset data(rows, Dataset::default_names(d), false);
  const LabelVector label_vector(labels, 2);
  const model::ModelHandle handle = model::ModelHandle::stub(2, d, [](const Vector& x) {
    const double p = 1.0 / (1.0 + std::exp(-2.0 * x[0]));
    Vector out(2);
    out << 1.0 - p, p;
    return out;
  });
  Vector target_values = Vector::Zero(d);
  target_values[0] = 1.5;
  const AttributionVector attr = baselines::shapley_sampling(
      data, label_vector, {target_values, 1}, handle, 16, 20, 77);
  CHECK(attr.scores.allFinite());
  CHECK(attr.scores[0] > 0.0);           // decisive feature pushes toward class 1
  CHECK(std::abs(attr.scores[17]) <= 0.05);  // ignored feature stays near zero
}

TEST_CASE("sampling is deterministic per seed and tightens with more subsets") {
  auto [data, labels] = small_fixture(50, 5, 37);
  const model::ModelHandle handle =
      model::train_builtin(model::BuiltinKind::Logistic, data, labels, 0);
  const TargetInstance target{data.rows.row(5).transpose(), labels.labels[5]};

  const AttributionVector a = shapley_sampling(data, labels, target, handle, 32, 30, 41);
  const AttributionVector b = shapley_sampling(data, labels, target, handle, 32, 30, 41);
  CHECK(a.scores == b.scores);

  const Dataset& dataset = data;
  const LabelVector& label_vector = labels;
  const auto spread_at = [&](int n_subsets) {
    std::vector<Vector> draws;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      draws.push_back(shapley_sampling(dataset, label_vector, target, handle, n_subsets, 30,
                                       100 + seed)
                          .scores);
    Vector mean = Vector::Zero(5);
    for (const auto& v : draws) mean += v;
    mean /= 20.0;
    double variance = 0.0;
    for (const auto& v : draws) variance += (v - mean).squaredNorm();
    return std::sqrt(variance / 20.0);
  };
  CHECK(spread_at(1024) <= spread_at(64));
}

TEST_CASE("pfi scores an ignored feature near zero") {
  auto [data, labels] = small_fixture(80, 3, 43);
  Vector weights(3);
  weights << 2.0, 1.0, 0.0;
  const model::ModelHandle handle = model::ModelHandle::stub(2, 3, [weights](const Vector& x) {
    const double p = 1.0 / (1.0 + std::exp(-weights.dot(x)));
    Vector out(2);
    out << 1.0 - p, p;
    return out;
  });
  const AttributionVector attr = pfi(data, labels, handle, 5, 47);
  CHECK(std::abs(attr.scores[2]) <= 0.02);
}

TEST_CASE("identity permutations leave accuracy untouched") {
  auto [data, labels] = small_fixture(40, 3, 53);
  const model::ModelHandle handle =
      model::train_builtin(model::BuiltinKind::Logistic, data, labels, 0);
  const AttributionVector attr =
      pfi_with_permutations(data, labels, handle, 1, [](Index n, Index, int) {
        std::vector<Index> identity(static_cast<std::size_t>(n));
        std::iota(identity.begin(), identity.end(), Index{0});
        return identity;
      });
  CHECK(attr.scores.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("permuting the decisive feature of a balanced sign model costs ~0.5") {
  const Index n = 2000;
  Matrix rows = fixtures::random_matrix(n, 2, 59);
  std::vector<int> labels;
  for (Index i = 0; i < n; ++i) labels.push_back(rows(i, 0) > 0 ? 1 : 0);
  const Dataset data(rows, Dataset::default_names(2), false);
  const LabelVector label_vector(labels, 2);
  const model::ModelHandle handle = model::ModelHandle::stub(2, 2, [](const Vector& x) {
    Vector out(2);
    out << (x[0] > 0 ? 0.0 : 1.0), (x[0] > 0 ? 1.0 : 0.0);
    return out;
  });
  const AttributionVector attr = pfi(data, label_vector, handle, 5, 61);
  CHECK(attr.scores[0] == doctest::Approx(0.5).epsilon(0.05 / 0.5));
  CHECK(std::abs(attr.scores[1]) < 1e-12);
}

TEST_CASE("random attribution is seeded and uniform over top ranks") {
  CHECK(random_attribution(4, 9).scores == random_attribution(4, 9).scores);
  CHECK(random_attribution(4, 9).scores != random_attribution(4, 10).scores);
  CHECK(rank_features(random_attribution(1, 3)).order == std::vector<Index>{0});

  const Index d = 5;
  std::vector<int> top_counts(static_cast<std::size_t>(d), 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const auto ranking =
        rank_features(random_attribution(d, static_cast<std::uint64_t>(i)));
    ++top_counts[static_cast<std::size_t>(ranking.order[0])];
  }
  for (Index j = 0; j < d; ++j) {
    const double frequency = static_cast<double>(top_counts[static_cast<std::size_t>(j)]) / draws;
    CHECK(frequency == doctest::Approx(1.0 / static_cast<double>(d)).epsilon(0.02 / 0.2));
  }
}

TEST_CASE("hybrid evaluation is counted as synthesized rows") {
  auto [data, labels] = small_fixture(20, 3, 67);
  const model::ModelHandle handle =
      model::train_builtin(model::BuiltinKind::Logistic, data, labels, 0);
  instrumentation::reset();
  shapley_sampling(data, labels, {data.rows.row(0).transpose(), labels.labels[0]}, handle, 4,
                   10, 71);
  CHECK(instrumentation::synthesized_rows() > 0);
  CHECK(instrumentation::classifier_queries() > 0);
  instrumentation::reset();
}

}  // TEST_SUITE
