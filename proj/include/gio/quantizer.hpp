#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gio/dataset.hpp"
#include "gio/rng.hpp"

namespace gio {

// K centroids plus the point -> cluster assignment of the quantized source.
// Every cluster is non-empty and every centroid is the mean of its members.
struct ClusterModel {
  VectorDataset centroids;
  std::vector<std::size_t> assignment;
  std::size_t source_count = 0;
  double inertia = 0.0;
  std::size_t iterations = 0;
  // Inertia after each Lloyd iteration; non-increasing.
  std::vector<double> inertia_history;

  std::size_t k() const { return centroids.size(); }
  std::vector<std::size_t> cluster_sizes() const;
};

inline constexpr std::size_t kDefaultKMeansIters = 100;
inline constexpr double kDefaultKMeansTol = 1e-4;

// Lloyd iterations from k-means++ seeding. Stops once the relative centroid
// shift drops below `tol` or after `max_iters` iterations. Empty clusters are
// refilled with the farthest point of the largest cluster.
ClusterModel kmeans(const VectorDataset& ds, std::size_t k, SeededRng& rng, std::size_t max_iters = kDefaultKMeansIters,
                    double tol = kDefaultKMeansTol);

// Every point is its own cluster. Used when a set is already small enough.
ClusterModel identity_model(const VectorDataset& ds);

// kmeans when |ds| > k, identity otherwise.
ClusterModel quantize(const VectorDataset& ds, std::size_t k, SeededRng& rng, std::size_t max_iters = kDefaultKMeansIters,
                      double tol = kDefaultKMeansTol);

// Source row indices belonging to the selected clusters, in source order. A
// cluster selected r times contributes each of its rows r times.
std::vector<std::size_t> explode_indices(std::span<const std::size_t> selected, std::span<const std::size_t> assignment,
                                         std::size_t k);
std::vector<std::size_t> explode_indices(std::span<const std::size_t> selected, const ClusterModel& model);
VectorDataset explode(std::span<const std::size_t> selected, const ClusterModel& model, const VectorDataset& source);

}  // namespace gio
