#include "gio/kl.hpp"

#include <cmath>
#include <string>

#include "gio/error.hpp"
#include "gio/kernels.hpp"

namespace gio {
namespace {

double floored_log(double dist) { return std::log(std::max(dist, kDistanceFloor)); }

void check_dims(PointsView x, PointsView ref) {
  if (!ref.empty() && x.dim != ref.dim) {
    throw DataError("dimension mismatch: target dim " + std::to_string(x.dim) + ", reference dim " +
                    std::to_string(ref.dim));
  }
}

void check_target(PointsView x, std::size_t order) {
  if (order == 0) throw ConfigError("neighbour order must be >= 1");
  if (x.size() < order + 1) {
    throw DataError("target set needs at least " + std::to_string(order + 1) + " points for neighbour order " +
                    std::to_string(order) + ", have " + std::to_string(x.size()));
  }
}

double mean_log(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += floored_log(x);
  return s / static_cast<double>(v.size());
}

// (1/m) sum_{k=1..m} log(l m / (k (n - 1)))
double averaged_constant(std::size_t l, std::size_t m, std::size_t n) {
  const double md = static_cast<double>(m);
  return std::log(static_cast<double>(l) * md / static_cast<double>(n - 1)) - std::lgamma(md + 1.0) / md;
}

}  // namespace

KnnDistances knn_distances(PointsView x, PointsView ref, std::size_t l) {
  check_dims(x, ref);
  check_target(x, l);
  KnnDistances out;
  out.l = l;
  out.nu = kernels::parallel::sorted_distance_rows(x, ref);
  out.rho = kernels::parallel::kth_neighbor_distances(x, l);
  return out;
}

double kl_single_k(PointsView x, PointsView ref, std::size_t k, bool discard_nearest) {
  check_dims(x, ref);
  check_target(x, k);
  const std::size_t skip = discard_nearest ? 1 : 0;
  if (ref.size() < k + skip) {
    throw DataError("reference set has " + std::to_string(ref.size()) + " points, need " + std::to_string(k + skip) +
                    " for k = " + std::to_string(k));
  }
  const auto nu = kernels::parallel::sorted_distance_rows(x, ref);
  const auto rho = kernels::parallel::kth_neighbor_distances(x, k);
  const double n = static_cast<double>(x.size());
  const double d = static_cast<double>(x.dim);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += d * floored_log(nu[i][k - 1 + skip]) - d * floored_log(rho[i]);
  const double m = static_cast<double>(ref.size() - skip);
  return acc / n + std::log(m / (n - 1.0));
}

double kl_averaged(PointsView x, PointsView ref, std::size_t l, bool discard_nearest) {
  check_dims(x, ref);
  check_target(x, l);
  VectorDataset target(x.dim, std::vector<double>(x.values.begin(), x.values.end()));
  return AveragedKl(std::move(target), l, discard_nearest).evaluate(ref);
}

Vector kl_gradient(PointsView x, PointsView ref, std::span<const double> v, std::size_t l, bool discard_nearest) {
  check_dims(x, ref);
  check_target(x, l);
  VectorDataset target(x.dim, std::vector<double>(x.values.begin(), x.values.end()));
  return AveragedKl(std::move(target), l, discard_nearest).gradient(ref, v);
}

Vector kl_single_k_gradient(PointsView x, PointsView ref, std::span<const double> v, std::size_t k) {
  check_dims(x, ref);
  check_target(x, k);
  if (v.size() != x.dim) throw DataError("v has the wrong dimension");
  if (ref.size() + 1 < k) throw DataError("reference set too small for k = " + std::to_string(k));
  const double n = static_cast<double>(x.size());
  const double d = static_cast<double>(x.dim);
  Vector g(x.dim, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto xi = x.row(i);
    const double dv = distance(xi, v);
    // v is the k-th nearest of ref + {v} iff exactly k - 1 reference points
    // are strictly closer and v is not tied with a point at that rank.
    std::size_t closer = 0;
    std::size_t tied = 0;
    for (std::size_t r = 0; r < ref.size(); ++r) {
      const double dr = distance(xi, ref.row(r));
      if (dr < dv) ++closer;
      else if (dr == dv) ++tied;
    }
    if (closer != k - 1 || tied != 0) continue;
    const double denom = std::max(dv * dv, kDistanceFloor * kDistanceFloor);
    for (std::size_t j = 0; j < x.dim; ++j) g[j] += d / n * (v[j] - xi[j]) / denom;
  }
  return g;
}

AveragedKl::AveragedKl(VectorDataset target, std::size_t l, bool discard_nearest)
    : target_(std::move(target)), l_(l), discard_nearest_(discard_nearest) {
  check_target(target_, l_);
  mean_log_rho_ = mean_log(kernels::parallel::kth_neighbor_distances(target_, l_));
}

double AveragedKl::assemble(const std::vector<double>& sum_log, const std::vector<double>& min_dist,
                            std::size_t m) const {
  const std::size_t m_eff = discard_nearest_ ? m - 1 : m;
  if (m == 0 || m_eff == 0) {
    throw DataError(discard_nearest_ ? "reference set needs at least 2 points when discarding the nearest"
                                     : "reference set is empty");
  }
  const double n = static_cast<double>(target_.size());
  const double d = static_cast<double>(target_.dim());
  double nu_sum = 0.0;
  for (std::size_t i = 0; i < sum_log.size(); ++i) {
    nu_sum += discard_nearest_ ? sum_log[i] - floored_log(min_dist[i]) : sum_log[i];
  }
  return d * nu_sum / (n * static_cast<double>(m_eff)) - d * mean_log_rho_ + averaged_constant(l_, m_eff, target_.size());
}

double AveragedKl::evaluate(PointsView ref) const {
  check_dims(target_, ref);
  const auto stats = kernels::parallel::row_log_stats(target_, ref, {}, kDistanceFloor);
  return assemble(stats.sum_log, stats.min_dist, ref.size());
}

double AveragedKl::evaluate_with(PointsView ref, std::span<const double> v) const {
  check_dims(target_, ref);
  if (v.size() != target_.dim()) throw DataError("v has the wrong dimension");
  const auto stats = kernels::parallel::row_log_stats(target_, ref, v, kDistanceFloor);
  return assemble(stats.sum_log, stats.min_dist, ref.size() + 1);
}

AveragedKl::Reference AveragedKl::prepare(PointsView ref) const {
  check_dims(target_, ref);
  Reference out;
  out.count = ref.size();
  if (discard_nearest_) {
    if (ref.empty()) throw DataError("reference set needs at least 1 point when discarding the nearest");
    out.nearest = kernels::parallel::row_log_stats(target_, ref, {}, kDistanceFloor).min_dist;
  }
  return out;
}

Vector AveragedKl::gradient(const Reference& ref, std::span<const double> v) const {
  if (v.size() != target_.dim()) throw DataError("v has the wrong dimension");
  const std::size_t m_eff = discard_nearest_ ? ref.count : ref.count + 1;
  // With discard, v contributes only for rows where it is not the nearest point.
  Vector g = kernels::parallel::inverse_square_pull(target_, v, ref.nearest, kDistanceFloor);
  const double scale = static_cast<double>(target_.dim()) /
                       (static_cast<double>(m_eff) * static_cast<double>(target_.size()));
  for (auto& gj : g) gj *= scale;
  return g;
}

}  // namespace gio
