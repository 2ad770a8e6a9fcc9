#include "gio/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "gio/error.hpp"

namespace gio {

Addition best_single_addition(const AveragedKl& objective, PointsView ref, const VectorDataset& g,
                              const CandidatePool& remaining) {
  if (remaining.empty()) throw DataError("no remaining candidates to choose from");
  std::vector<std::size_t> open;
  open.reserve(remaining.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (remaining.contains(i)) open.push_back(i);
  }
  std::vector<double> kl(open.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(open.size()); ++c) {
    kl[static_cast<std::size_t>(c)] = objective.evaluate_with(ref, g.point(open[static_cast<std::size_t>(c)]));
  }
  Addition best{open.front(), kl.front()};
  for (std::size_t c = 1; c < open.size(); ++c) {
    if (kl[c] < best.kl) best = {open[c], kl[c]};
  }
  return best;
}

SelectionReport naive_hill_climb(const VectorDataset& x, const VectorDataset& g, const VectorDataset& d0,
                                 std::size_t iters, std::size_t l) {
  const auto started = std::chrono::steady_clock::now();
  if (g.empty()) throw DataError("candidate set is empty");
  if (x.dim() != g.dim() || (!d0.empty() && d0.dim() != x.dim())) throw DataError("dimension mismatch");
  const AveragedKl objective(x, l);
  const std::size_t dim = x.dim();

  SelectionReport report;
  report.method = "naive";
  std::vector<double> reference(d0.values().begin(), d0.values().end());
  if (!d0.empty()) report.baseline_kl = objective.evaluate(d0);
  CandidatePool remaining(g.size());
  report.reason = StopReason::MaxIter;
  for (std::size_t step = 0; step < iters; ++step) {
    if (remaining.empty()) {
      report.reason = StopReason::Exhausted;
      break;
    }
    const auto best = best_single_addition(objective, PointsView{reference, dim}, g, remaining);
    const auto p = g.point(best.index);
    reference.insert(reference.end(), p.begin(), p.end());
    remaining.remove(best.index);
    report.acquired.push_back(best.index);
    report.kl_history.push_back(best.kl);
    ++report.iterations;
  }
  report.timings["select"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<std::size_t> similarity_search_select(const VectorDataset& x, const VectorDataset& g,
                                                  std::size_t target_size) {
  if (target_size > g.size()) {
    throw DataError("target size " + std::to_string(target_size) + " exceeds candidate count " +
                    std::to_string(g.size()));
  }
  if (target_size == 0) return {};
  if (x.empty()) throw DataError("similarity search needs at least one target point");
  if (x.dim() != g.dim()) throw DataError("dimension mismatch");

  const std::size_t m = g.size();
  // Best (rank, distance) of each candidate over all target points.
  std::vector<std::pair<std::size_t, double>> best(m, {std::numeric_limits<std::size_t>::max(), 0.0});
  std::vector<std::size_t> order(m);
  std::vector<double> dist(m);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t c = 0; c < m; ++c) dist[c] = distance(x.point(i), g.point(c));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t c = order[r];
      const std::pair<std::size_t, double> key{r, dist[c]};
      if (key < best[c]) best[c] = key;
    }
  }
  std::vector<std::size_t> candidates(m);
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(best[a].first, best[a].second, a) < std::tie(best[b].first, best[b].second, b);
  });
  candidates.resize(target_size);
  return candidates;
}

std::vector<std::size_t> random_select(const VectorDataset& g, std::size_t target_size, SeededRng& rng) {
  if (target_size > g.size()) {
    throw DataError("target size " + std::to_string(target_size) + " exceeds candidate count " +
                    std::to_string(g.size()));
  }
  return rng.sample_without_replacement(g.size(), target_size);
}

}  // namespace gio
