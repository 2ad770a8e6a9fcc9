#include <algorithm>
#include <cmath>
#include <limits>

#include "gio/kernels.hpp"
#include "gio/parallel.hpp"

namespace gio::kernels::parallel {

RowLogStats row_log_stats(PointsView x, PointsView ref, std::span<const double> extra, double floor) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const std::size_t m = ref.size();
  RowLogStats out{std::vector<double>(x.size(), 0.0), std::vector<double>(x.size(), 0.0)};
  const double floor_sq = floor * floor;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto xi = x.row(static_cast<std::size_t>(i));
    double sum = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double sq = std::max(squared_distance(xi, ref.row(r)), floor_sq);
      sum += 0.5 * std::log(sq);
      best = std::min(best, sq);
    }
    if (!extra.empty()) {
      const double sq = std::max(squared_distance(xi, extra), floor_sq);
      sum += 0.5 * std::log(sq);
      best = std::min(best, sq);
    }
    out.sum_log[static_cast<std::size_t>(i)] = sum;
    out.min_dist[static_cast<std::size_t>(i)] = std::sqrt(best);
  }
  return out;
}

std::vector<double> kth_neighbor_distances(PointsView x, std::size_t l) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> out(x.size());
#pragma omp parallel
  {
    std::vector<double> d;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      d.clear();
      const auto xi = x.row(static_cast<std::size_t>(i));
      for (std::ptrdiff_t j = 0; j < n; ++j) {
        if (j != i) d.push_back(squared_distance(xi, x.row(static_cast<std::size_t>(j))));
      }
      std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(l - 1), d.end());
      out[static_cast<std::size_t>(i)] = std::sqrt(d[l - 1]);
    }
  }
  return out;
}

std::vector<double> inverse_square_pull(PointsView x, std::span<const double> v, std::span<const double> skip_below,
                                        double floor) {
  const std::size_t dim = v.size();
  const std::size_t n = x.size();
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks * dim, 0.0);
  const double floor_sq = floor * floor;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    double* acc = partial.data() + static_cast<std::size_t>(b) * dim;
    const std::size_t end = std::min(n, (static_cast<std::size_t>(b) + 1) * kReductionBlock);
    for (std::size_t i = static_cast<std::size_t>(b) * kReductionBlock; i < end; ++i) {
      const auto xi = x.row(i);
      const double sq = squared_distance(xi, v);
      if (!skip_below.empty() && std::sqrt(sq) < skip_below[i]) continue;
      const double denom = std::max(sq, floor_sq);
      for (std::size_t j = 0; j < dim; ++j) acc[j] += (v[j] - xi[j]) / denom;
    }
  }
  std::vector<double> g(dim, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t j = 0; j < dim; ++j) g[j] += partial[b * dim + j];
  }
  return g;
}

void assign_nearest(PointsView points, PointsView centroids, std::vector<std::size_t>& assignment,
                    std::vector<double>& sq_dist) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  const std::size_t k = centroids.size();
  assignment.assign(points.size(), 0);
  sq_dist.assign(points.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto p = points.row(static_cast<std::size_t>(i));
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t c = 0; c < k; ++c) {
      const double sq = squared_distance(p, centroids.row(c));
      if (sq < best) {
        best = sq;
        arg = c;
      }
    }
    assignment[static_cast<std::size_t>(i)] = arg;
    sq_dist[static_cast<std::size_t>(i)] = best;
  }
}

std::vector<std::vector<double>> sorted_distance_rows(PointsView x, PointsView ref) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<std::vector<double>> rows(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    row.reserve(ref.size());
    for (std::size_t r = 0; r < ref.size(); ++r) row.push_back(distance(x.row(static_cast<std::size_t>(i)), ref.row(r)));
    std::sort(row.begin(), row.end());
  }
  return rows;
}

}  // namespace gio::kernels::parallel
