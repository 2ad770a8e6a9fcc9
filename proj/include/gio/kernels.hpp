#pragma once

// Data-parallel inner loops shared by the estimator, the quantizer and the
// baselines. `parallel::` holds the OpenMP kernels used in production;
// `serial::` holds plain reference loops kept for testing and benchmarking.
// Both namespaces expose identical signatures.

#include <cstddef>
#include <span>
#include <vector>

#include "gio/dataset.hpp"

namespace gio::kernels {

// Per target row: sum of log(max(dist, floor)) over the reference rows (plus
// `extra` when non-empty) and the smallest such distance.
struct RowLogStats {
  std::vector<double> sum_log;
  std::vector<double> min_dist;
};

namespace serial {

RowLogStats row_log_stats(PointsView x, PointsView ref, std::span<const double> extra, double floor);

// Distance from each row of x to its l-th nearest other row (l >= 1).
std::vector<double> kth_neighbor_distances(PointsView x, std::size_t l);

// Sum over i of (v - x_i) / max(|x_i - v|^2, floor^2). When skip_below is
// non-empty, rows with |x_i - v| < skip_below[i] contribute nothing.
std::vector<double> inverse_square_pull(PointsView x, std::span<const double> v, std::span<const double> skip_below,
                                        double floor);

// Nearest centroid per point (lowest index on ties) and its squared distance.
void assign_nearest(PointsView points, PointsView centroids, std::vector<std::size_t>& assignment,
                    std::vector<double>& sq_dist);

std::vector<std::vector<double>> sorted_distance_rows(PointsView x, PointsView ref);

}  // namespace serial

namespace parallel {

RowLogStats row_log_stats(PointsView x, PointsView ref, std::span<const double> extra, double floor);
std::vector<double> kth_neighbor_distances(PointsView x, std::size_t l);
std::vector<double> inverse_square_pull(PointsView x, std::span<const double> v, std::span<const double> skip_below,
                                        double floor);
void assign_nearest(PointsView points, PointsView centroids, std::vector<std::size_t>& assignment,
                    std::vector<double>& sq_dist);
std::vector<std::vector<double>> sorted_distance_rows(PointsView x, PointsView ref);

}  // namespace parallel

}  // namespace gio::kernels
