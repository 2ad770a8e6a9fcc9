#include "gio/quantizer.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "gio/error.hpp"
#include "gio/kernels.hpp"

namespace gio {
namespace {

std::vector<double> kmeanspp_seeds(const VectorDataset& ds, std::size_t k, SeededRng& rng) {
  const std::size_t n = ds.size();
  const std::size_t d = ds.dim();
  std::vector<double> centers;
  centers.reserve(k * d);
  std::vector<char> chosen(n, 0);
  auto take = [&](std::size_t i) {
    chosen[i] = 1;
    const auto p = ds.point(i);
    centers.insert(centers.end(), p.begin(), p.end());
  };

  take(static_cast<std::size_t>(rng.below(n)));
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) weight[i] = squared_distance(ds.point(i), {centers.data(), d});

  while (centers.size() / d < k) {
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += weight[i];
        if (weight[i] > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        // Rounding left target at the very top of the range.
        for (std::size_t i = n; i-- > 0;) {
          if (weight[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // Every remaining point duplicates a chosen center.
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) free.push_back(i);
      }
      pick = free[static_cast<std::size_t>(rng.below(free.size()))];
    }
    take(pick);
    const std::span<const double> c(centers.data() + centers.size() - d, d);
    for (std::size_t i = 0; i < n; ++i) weight[i] = std::min(weight[i], squared_distance(ds.point(i), c));
  }
  return centers;
}

void repair_empty_clusters(const VectorDataset& ds, std::size_t k, std::vector<double>& centers,
                           std::vector<std::size_t>& assignment, std::vector<double>& sq_dist) {
  const std::size_t d = ds.dim();
  std::vector<std::size_t> sizes(k, 0);
  for (const auto a : assignment) ++sizes[a];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t largest = 0;
    for (std::size_t j = 1; j < k; ++j) {
      if (sizes[j] > sizes[largest]) largest = j;
    }
    std::size_t far = ds.size();
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (assignment[i] == largest && (far == ds.size() || sq_dist[i] > sq_dist[far])) far = i;
    }
    const auto p = ds.point(far);
    std::copy(p.begin(), p.end(), centers.begin() + static_cast<std::ptrdiff_t>(c * d));
    assignment[far] = c;
    sq_dist[far] = 0.0;
    --sizes[largest];
    ++sizes[c];
  }
}

std::vector<double> cluster_means(const VectorDataset& ds, std::size_t k, const std::vector<std::size_t>& assignment) {
  const std::size_t d = ds.dim();
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < assignment.size(); ++i) members[assignment[i]].push_back(i);
  std::vector<double> means(k * d, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(k); ++c) {
    double* out = means.data() + static_cast<std::size_t>(c) * d;
    const auto& mem = members[static_cast<std::size_t>(c)];
    for (const auto i : mem) {
      const auto p = ds.point(i);
      for (std::size_t j = 0; j < d; ++j) out[j] += p[j];
    }
    for (std::size_t j = 0; j < d; ++j) out[j] /= static_cast<double>(mem.size());
  }
  return means;
}

double inertia_of(const VectorDataset& ds, const std::vector<double>& centers, const std::vector<std::size_t>& assignment) {
  const std::size_t d = ds.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    total += squared_distance(ds.point(i), {centers.data() + assignment[i] * d, d});
  }
  return total;
}

}  // namespace

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
  std::vector<std::size_t> sizes(k(), 0);
  for (const auto a : assignment) ++sizes[a];
  return sizes;
}

ClusterModel kmeans(const VectorDataset& ds, std::size_t k, SeededRng& rng, std::size_t max_iters, double tol) {
  if (k == 0) throw ConfigError("kmeans requires k >= 1");
  if (max_iters == 0) throw ConfigError("kmeans requires max_iters >= 1");
  if (!(tol >= 0.0)) throw ConfigError("kmeans tolerance must be non-negative");
  if (ds.size() < k) {
    throw DataError("kmeans needs at least k points: have " + std::to_string(ds.size()) + ", k = " + std::to_string(k));
  }
  const std::size_t d = ds.dim();
  std::vector<double> centers = kmeanspp_seeds(ds, k, rng);
  ClusterModel model;
  model.source_count = ds.size();
  std::vector<double> sq_dist;

  for (std::size_t it = 1; it <= max_iters; ++it) {
    kernels::parallel::assign_nearest(ds, PointsView{centers, d}, model.assignment, sq_dist);
    repair_empty_clusters(ds, k, centers, model.assignment, sq_dist);
    std::vector<double> next = cluster_means(ds, k, model.assignment);
    double shift = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j) {
      shift += (next[j] - centers[j]) * (next[j] - centers[j]);
      scale += centers[j] * centers[j];
    }
    centers = std::move(next);
    model.iterations = it;
    model.inertia_history.push_back(inertia_of(ds, centers, model.assignment));
    if (std::sqrt(shift) <= tol * std::max(std::sqrt(scale), 1e-300)) break;
  }
  model.inertia = model.inertia_history.back();
  model.centroids = VectorDataset(d, std::move(centers));
  return model;
}

ClusterModel identity_model(const VectorDataset& ds) {
  ClusterModel model;
  model.centroids = VectorDataset(ds.dim(), std::vector<double>(ds.values().begin(), ds.values().end()));
  model.assignment.resize(ds.size());
  std::iota(model.assignment.begin(), model.assignment.end(), std::size_t{0});
  model.source_count = ds.size();
  model.inertia_history.push_back(0.0);
  return model;
}

ClusterModel quantize(const VectorDataset& ds, std::size_t k, SeededRng& rng, std::size_t max_iters, double tol) {
  if (k == 0) throw ConfigError("quantize requires k >= 1");
  if (ds.size() <= k) return identity_model(ds);
  return kmeans(ds, k, rng, max_iters, tol);
}

std::vector<std::size_t> explode_indices(std::span<const std::size_t> selected, std::span<const std::size_t> assignment,
                                         std::size_t k) {
  std::vector<std::size_t> multiplicity(k, 0);
  for (const auto c : selected) {
    if (c >= k) throw DataError("cluster index " + std::to_string(c) + " out of range (K = " + std::to_string(k) + ")");
    ++multiplicity[c];
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] >= k) {
      throw DataError("row " + std::to_string(i) + " assigned to cluster " + std::to_string(assignment[i]) +
                      " (K = " + std::to_string(k) + ")");
    }
    for (std::size_t r = 0; r < multiplicity[assignment[i]]; ++r) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> explode_indices(std::span<const std::size_t> selected, const ClusterModel& model) {
  return explode_indices(selected, model.assignment, model.k());
}

VectorDataset explode(std::span<const std::size_t> selected, const ClusterModel& model, const VectorDataset& source) {
  if (source.size() != model.source_count) {
    throw DataError("source has " + std::to_string(source.size()) + " rows but the model quantized " +
                    std::to_string(model.source_count));
  }
  const auto rows = explode_indices(selected, model);
  return source.subset(rows);
}

}  // namespace gio
