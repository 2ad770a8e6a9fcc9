#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gio/config.hpp"
#include "gio/dataset.hpp"
#include "gio/report.hpp"
#include "gio/rng.hpp"

namespace gio {

// Candidate centroid indices not yet selected, kept as a membership mask so
// nearest-candidate scans stay linear in |G|.
class CandidatePool {
 public:
  explicit CandidatePool(std::size_t total = 0) : available_(total, 1), count_(total) {}

  std::size_t total() const { return available_.size(); }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(std::size_t i) const { return i < available_.size() && available_[i] != 0; }
  void remove(std::size_t i);
  void insert(std::size_t i);
  void restore_all();
  std::span<const std::uint8_t> mask() const { return available_; }

 private:
  std::vector<std::uint8_t> available_;
  std::size_t count_;
};

struct SelectionState {
  // Acquisitions in order (duplicates possible after a reset).
  std::vector<std::size_t> selected;
  CandidatePool remaining;
  // One divergence per acquisition.
  std::vector<double> kl_history;
  std::size_t resets_used = 0;
  std::optional<Vector> prev_v_opt;
  // Divergence of the starting reference set, if it had any points.
  std::optional<double> baseline_kl;
  // Candidates placed in the selection before the loop started.
  std::size_t preselected = 0;
};

struct StopDecision {
  enum class Action { Continue, Stop, Reset };
  Action action = Action::Continue;
  std::optional<StopReason> reason;

  static StopDecision proceed() { return {}; }
  static StopDecision stop(StopReason r) { return {Action::Stop, r}; }
  static StopDecision reset(StopReason r) { return {Action::Reset, r}; }
};

// Remaining centroid nearest to v (Euclidean), lowest index on ties.
std::size_t nearest_candidate(std::span<const double> v, const CandidatePool& remaining, PointsView centroids);

// Pure function of the history and counters. The newest kl_history entry is
// compared with the one before it (or with the baseline for the first
// acquisition). A reset is returned instead of a stop when resets are allowed,
// budget remains, and the criterion is one that fires on KL increases.
StopDecision should_stop(const StoppingCriterion& criterion, const SelectionState& state, std::size_t total_candidates);

VectorDataset make_uniform_start(const UniformStartConfig& cfg, std::size_t dim, SeededRng& rng);

struct NoInit {};
struct UniformInit {
  UniformStartConfig uniform;
};
struct SubsetInit {
  double fraction = 0.0;
};
struct ExplicitInit {
  VectorDataset points;
};
using InitStrategy = std::variant<NoInit, UniformInit, SubsetInit, ExplicitInit>;

// The outer selection loop over quantized target and candidate sets.
// Uniform-start points take part in every divergence estimate but never
// appear in the report. Randomness is drawn from named child streams of
// cfg.seed ("uniform", "subset", "jump", "restart").
SelectionReport run_gio(const VectorDataset& x_centroids, const VectorDataset& g_centroids, const InitStrategy& init,
                        const GioConfig& cfg);

}  // namespace gio
