#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gio/error.hpp"
#include "gio/quantizer.hpp"
#include "oracles.hpp"

using namespace gio;

TEST_CASE("kmeans model invariants") {
  SeededRng data(30);
  const auto ds = oracle::gaussian(data, 500, 3);
  SeededRng rng(1);
  const auto model = kmeans(ds, 12, rng);
  REQUIRE(model.k() == 12);
  CHECK(model.source_count == 500);
  CHECK(model.assignment.size() == 500);

  const auto sizes = model.cluster_sizes();
  for (const auto s : sizes) CHECK(s > 0);

  // Each point sits in its nearest cluster (up to ties).
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double own = oracle::dist(ds.point(i), model.centroids.point(model.assignment[i]));
    for (std::size_t c = 0; c < model.k(); ++c) {
      CHECK(own <= oracle::dist(ds.point(i), model.centroids.point(c)) + 1e-9);
    }
  }

  // Inertia matches the assignment and never increases.
  double inertia = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double d = oracle::dist(ds.point(i), model.centroids.point(model.assignment[i]));
    inertia += d * d;
  }
  CHECK(model.inertia == doctest::Approx(inertia).epsilon(1e-9));
  for (std::size_t t = 1; t < model.inertia_history.size(); ++t) {
    CHECK(model.inertia_history[t] <= model.inertia_history[t - 1] * (1.0 + 1e-12));
  }
}

TEST_CASE("centroids are the means of their members at convergence") {
  SeededRng data(31);
  const auto ds = oracle::gaussian(data, 300, 2);
  SeededRng rng(2);
  const auto model = kmeans(ds, 5, rng, 500, 0.0);
  std::vector<std::vector<double>> sums(5, std::vector<double>(2, 0.0));
  const auto sizes = model.cluster_sizes();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) sums[model.assignment[i]][j] += ds.point(i)[j];
  }
  for (std::size_t c = 0; c < 5; ++c) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(model.centroids.point(c)[j] == doctest::Approx(sums[c][j] / static_cast<double>(sizes[c])).epsilon(1e-9));
    }
  }
}

TEST_CASE("kmeans recovers well separated blobs") {
  SeededRng data(32);
  std::vector<Vector> rows;
  const std::vector<Vector> centers{{0, 0}, {50, 0}, {0, 50}};
  for (std::size_t i = 0; i < 300; ++i) {
    const auto& c = centers[i % 3];
    rows.push_back({c[0] + data.normal(), c[1] + data.normal()});
  }
  const auto ds = VectorDataset::from_rows(rows);
  SeededRng rng(3);
  const auto model = kmeans(ds, 3, rng);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(model.assignment[i] == model.assignment[i % 3]);
  }
  CHECK(model.inertia < 300.0 * 2.0 * 1.5);
}

TEST_CASE("kmeans is deterministic for a seed") {
  SeededRng data(33);
  const auto ds = oracle::gaussian(data, 200, 4);
  SeededRng a(9), b(9);
  const auto m1 = kmeans(ds, 7, a);
  const auto m2 = kmeans(ds, 7, b);
  CHECK(m1.assignment == m2.assignment);
  CHECK(std::equal(m1.centroids.values().begin(), m1.centroids.values().end(), m2.centroids.values().begin()));
}

TEST_CASE("duplicated points still give non-empty clusters") {
  std::vector<Vector> rows(20, Vector{1.0, 1.0});
  rows.push_back({5.0, 5.0});
  rows.push_back({9.0, 9.0});
  const auto ds = VectorDataset::from_rows(rows);
  SeededRng rng(4);
  const auto model = kmeans(ds, 4, rng);
  for (const auto s : model.cluster_sizes()) CHECK(s > 0);
}

TEST_CASE("kmeans argument errors") {
  const auto ds = VectorDataset::from_rows({{0.0}, {1.0}});
  SeededRng rng(5);
  CHECK_THROWS_AS(kmeans(ds, 0, rng), ConfigError);
  CHECK_THROWS_AS(kmeans(ds, 3, rng), DataError);
}

TEST_CASE("quantize falls back to identity for small sets") {
  const auto ds = VectorDataset::from_rows({{0.0}, {1.0}, {2.0}});
  SeededRng rng(6);
  const auto model = quantize(ds, 10, rng);
  CHECK(model.k() == 3);
  CHECK(model.assignment == std::vector<std::size_t>{0, 1, 2});
  CHECK(model.inertia == 0.0);
}

TEST_CASE("explode expands clusters with multiplicity in source order") {
  ClusterModel model = identity_model(VectorDataset::from_rows({{0.0}, {1.0}, {2.0}}));
  model.assignment = {2, 0, 1, 0, 2};
  model.source_count = 5;
  const std::vector<std::size_t> selected{0, 2, 0};
  CHECK(explode_indices(selected, model) == std::vector<std::size_t>{0, 1, 1, 3, 3, 4});
  CHECK_THROWS_AS(explode_indices(std::vector<std::size_t>{3}, model), DataError);

  const auto source = VectorDataset::from_rows({{10}, {11}, {12}, {13}, {14}});
  const auto rows = explode(std::vector<std::size_t>{1}, model, source);
  REQUIRE(rows.size() == 1);
  CHECK(rows.point(0)[0] == 12.0);
  CHECK_THROWS_AS(explode(selected, model, VectorDataset::from_rows({{1.0}})), DataError);
}

TEST_CASE("exploding every cluster once returns every row once") {
  SeededRng data(34);
  const auto ds = oracle::gaussian(data, 120, 2);
  SeededRng rng(7);
  const auto model = kmeans(ds, 9, rng);
  std::vector<std::size_t> all(model.k());
  for (std::size_t c = 0; c < all.size(); ++c) all[c] = c;
  const auto rows = explode_indices(all, model);
  CHECK(rows.size() == ds.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i] == i);
}
