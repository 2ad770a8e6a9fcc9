#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gio/dataset.hpp"
#include "gio/kl.hpp"
#include "gio/report.hpp"
#include "gio/rng.hpp"
#include "gio/selector.hpp"

namespace gio {

struct Addition {
  std::size_t index = 0;
  double kl = 0.0;
};

// Exact argmin over every remaining candidate of kl(x || ref + {g_i}),
// lowest index on ties. Candidate evaluations run in parallel.
Addition best_single_addition(const AveragedKl& objective, PointsView ref, const VectorDataset& g,
                              const CandidatePool& remaining);

// Greedy hill-climb: each step adds the candidate whose addition gives the
// smallest divergence. Runs `iters` steps or until g is exhausted.
SelectionReport naive_hill_climb(const VectorDataset& x, const VectorDataset& g, const VectorDataset& d0,
                                 std::size_t iters, std::size_t l);

// Candidates ordered by their best rank in any target point's neighbour list
// (ties: smaller distance, then lower index); the first target_size are
// taken. Rank r therefore covers every target's r-th nearest candidate
// before any target's (r+1)-th, and the result does not depend on the order
// of the target rows.
std::vector<std::size_t> similarity_search_select(const VectorDataset& x, const VectorDataset& g,
                                                  std::size_t target_size);

std::vector<std::size_t> random_select(const VectorDataset& g, std::size_t target_size, SeededRng& rng);

}  // namespace gio
