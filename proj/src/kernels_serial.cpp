#include <algorithm>
#include <cmath>
#include <limits>

#include "gio/kernels.hpp"
#include "gio/parallel.hpp"

namespace gio::kernels::serial {

RowLogStats row_log_stats(PointsView x, PointsView ref, std::span<const double> extra, double floor) {
  const std::size_t n = x.size();
  RowLogStats out{std::vector<double>(n, 0.0), std::vector<double>(n, std::numeric_limits<double>::infinity())};
  const double floor_sq = floor * floor;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = x.row(i);
    double sum = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < ref.size(); ++r) {
      const double sq = std::max(squared_distance(xi, ref.row(r)), floor_sq);
      sum += 0.5 * std::log(sq);
      best = std::min(best, sq);
    }
    if (!extra.empty()) {
      const double sq = std::max(squared_distance(xi, extra), floor_sq);
      sum += 0.5 * std::log(sq);
      best = std::min(best, sq);
    }
    out.sum_log[i] = sum;
    out.min_dist[i] = std::sqrt(best);
  }
  return out;
}

std::vector<double> kth_neighbor_distances(PointsView x, std::size_t l) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  std::vector<double> d;
  for (std::size_t i = 0; i < n; ++i) {
    d.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d.push_back(squared_distance(x.row(i), x.row(j)));
    }
    std::sort(d.begin(), d.end());
    out[i] = std::sqrt(d[l - 1]);
  }
  return out;
}

std::vector<double> inverse_square_pull(PointsView x, std::span<const double> v, std::span<const double> skip_below,
                                        double floor) {
  const std::size_t dim = v.size();
  std::vector<double> g(dim, 0.0);
  std::vector<double> block(dim, 0.0);
  const double floor_sq = floor * floor;
  // Summed in fixed blocks so the rounding matches the parallel kernel.
  for (std::size_t start = 0; start < x.size(); start += kReductionBlock) {
    std::fill(block.begin(), block.end(), 0.0);
    const std::size_t end = std::min(x.size(), start + kReductionBlock);
    for (std::size_t i = start; i < end; ++i) {
      const auto xi = x.row(i);
      const double sq = squared_distance(xi, v);
      if (!skip_below.empty() && std::sqrt(sq) < skip_below[i]) continue;
      const double denom = std::max(sq, floor_sq);
      for (std::size_t j = 0; j < dim; ++j) block[j] += (v[j] - xi[j]) / denom;
    }
    for (std::size_t j = 0; j < dim; ++j) g[j] += block[j];
  }
  return g;
}

void assign_nearest(PointsView points, PointsView centroids, std::vector<std::size_t>& assignment,
                    std::vector<double>& sq_dist) {
  const std::size_t n = points.size();
  assignment.assign(n, 0);
  sq_dist.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double sq = squared_distance(points.row(i), centroids.row(c));
      if (sq < best) {
        best = sq;
        arg = c;
      }
    }
    assignment[i] = arg;
    sq_dist[i] = best;
  }
}

std::vector<std::vector<double>> sorted_distance_rows(PointsView x, PointsView ref) {
  std::vector<std::vector<double>> rows(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto& row = rows[i];
    row.reserve(ref.size());
    for (std::size_t r = 0; r < ref.size(); ++r) row.push_back(distance(x.row(i), ref.row(r)));
    std::sort(row.begin(), row.end());
  }
  return rows;
}

}  // namespace gio::kernels::serial
