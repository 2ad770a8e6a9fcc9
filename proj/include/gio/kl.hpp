#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gio/dataset.hpp"

namespace gio {

// Floor applied to every distance inside a log and to every gradient
// denominator, so duplicate points never produce -inf or NaN.
inline constexpr double kDistanceFloor = 1e-12;

// nu[i] holds the distances from target point i to every reference point in
// ascending order (nu[i][k-1] is the k-th nearest). rho[i] is the distance
// from target point i to its l-th nearest other target point.
struct KnnDistances {
  std::vector<std::vector<double>> nu;
  std::vector<double> rho;
  std::size_t l = 1;
};

KnnDistances knn_distances(PointsView x, PointsView ref, std::size_t l);

// Classic single-k kNN estimator:
//   (1/n) sum_i [d log nu_k(i) - d log rho_k(i)] + log(m / (n - 1)).
// With discard_nearest the nearest reference point of each target row is
// skipped (nu ranks shift by one and m becomes m - 1); use it when the
// reference set contains the targets themselves.
double kl_single_k(PointsView x, PointsView ref, std::size_t k, bool discard_nearest = false);

// Estimator averaged over every nu rank k = 1..m with rho fixed at order l:
//   (1/m) sum_k (1/n) sum_i [d log nu_k(i) - d log rho_l(i)]
//     + (1/m) sum_k log(l m / (k (n - 1))).
// The nu part is evaluated through sum_k log nu_k(i) = sum_y log |x_i - y|.
double kl_averaged(PointsView x, PointsView ref, std::size_t l, bool discard_nearest = false);

// d/dv of kl_averaged(x, ref + {v}, l):
//   d / (m' n) * sum_i (v - x_i) / |x_i - v|^2,  m' = |ref| + 1.
Vector kl_gradient(PointsView x, PointsView ref, std::span<const double> v, std::size_t l,
                   bool discard_nearest = false);

// d/dv of kl_single_k(x, ref + {v}, k). Only target rows for which v is
// exactly the k-th nearest reference point contribute, so the result is the
// zero vector whenever v is farther than every row's k-th neighbour.
Vector kl_single_k_gradient(PointsView x, PointsView ref, std::span<const double> v, std::size_t k);

// Averaged estimator bound to a fixed target set. The rho term depends only
// on the targets and is computed once; evaluations against changing
// reference sets then cost one pass over the n x m distance pairs.
class AveragedKl {
 public:
  AveragedKl(VectorDataset target, std::size_t l, bool discard_nearest = false);

  const VectorDataset& target() const { return target_; }
  std::size_t l() const { return l_; }
  bool discard_nearest() const { return discard_nearest_; }

  double evaluate(PointsView ref) const;
  // Divergence against ref + {v}, without materializing the union.
  double evaluate_with(PointsView ref, std::span<const double> v) const;

  // Per-reference-set data reused across many gradient evaluations.
  struct Reference {
    std::size_t count = 0;
    std::vector<double> nearest;  // filled only when discarding the nearest point
  };
  Reference prepare(PointsView ref) const;
  Vector gradient(const Reference& ref, std::span<const double> v) const;
  Vector gradient(PointsView ref, std::span<const double> v) const { return gradient(prepare(ref), v); }

 private:
  double assemble(const std::vector<double>& sum_log, const std::vector<double>& min_dist, std::size_t m) const;

  VectorDataset target_;
  std::size_t l_;
  bool discard_nearest_;
  double mean_log_rho_ = 0.0;
};

}  // namespace gio
