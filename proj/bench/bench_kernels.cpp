// Serial reference loops against the OpenMP kernels on random Gaussian data.
// Arguments: rows of the reference set, dimension.

#include <benchmark/benchmark.h>

#include <vector>

#include "gio/dataset.hpp"
#include "gio/kernels.hpp"
#include "gio/rng.hpp"

namespace {

gio::VectorDataset gaussian(std::size_t n, std::size_t dim, std::uint64_t seed) {
  gio::SeededRng rng(seed);
  std::vector<double> values(n * dim);
  for (auto& v : values) v = rng.normal();
  return gio::VectorDataset(dim, std::move(values));
}

constexpr std::size_t kTargets = 200;
constexpr double kFloor = 1e-10;

template <auto Fn>
void row_log_stats(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto x = gaussian(kTargets, dim, 1);
  const auto ref = gaussian(static_cast<std::size_t>(state.range(0)), dim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x, ref, {}, kFloor));
  state.SetItemsProcessed(state.iterations() * kTargets * state.range(0));
}

template <auto Fn>
void inverse_square_pull(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto x = gaussian(static_cast<std::size_t>(state.range(0)), dim, 3);
  const std::vector<double> v(dim, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x, v, {}, kFloor));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void assign_nearest(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto points = gaussian(static_cast<std::size_t>(state.range(0)), dim, 4);
  const auto centroids = gaussian(64, dim, 5);
  std::vector<std::size_t> assignment;
  std::vector<double> sq_dist;
  for (auto _ : state) {
    Fn(points, centroids, assignment, sq_dist);
    benchmark::DoNotOptimize(assignment.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}

template <auto Fn>
void kth_neighbor(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto x = gaussian(static_cast<std::size_t>(state.range(0)) / 4, dim, 6);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(x, 5));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (const long n : {1000, 8000}) {
    for (const long dim : {2, 64}) b->Args({n, dim});
  }
}

namespace k = gio::kernels;

BENCHMARK(row_log_stats<k::serial::row_log_stats>)->Name("row_log_stats/serial")->Apply(sizes);
BENCHMARK(row_log_stats<k::parallel::row_log_stats>)->Name("row_log_stats/omp")->Apply(sizes)->UseRealTime();
BENCHMARK(inverse_square_pull<k::serial::inverse_square_pull>)->Name("inverse_square_pull/serial")->Apply(sizes);
BENCHMARK(inverse_square_pull<k::parallel::inverse_square_pull>)
    ->Name("inverse_square_pull/omp")
    ->Apply(sizes)
    ->UseRealTime();
BENCHMARK(assign_nearest<k::serial::assign_nearest>)->Name("assign_nearest/serial")->Apply(sizes);
BENCHMARK(assign_nearest<k::parallel::assign_nearest>)->Name("assign_nearest/omp")->Apply(sizes)->UseRealTime();
BENCHMARK(kth_neighbor<k::serial::kth_neighbor_distances>)->Name("kth_neighbor/serial")->Apply(sizes);
BENCHMARK(kth_neighbor<k::parallel::kth_neighbor_distances>)->Name("kth_neighbor/omp")->Apply(sizes)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
