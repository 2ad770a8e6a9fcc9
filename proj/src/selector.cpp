#include "gio/selector.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "gio/error.hpp"
#include "gio/kl.hpp"
#include "gio/optimizer.hpp"

namespace gio {
namespace {

std::optional<double> previous_kl(const SelectionState& state, std::size_t pos) {
  if (pos > 0) return state.kl_history[pos - 1];
  return state.baseline_kl;
}

bool increased_at(const SelectionState& state, std::size_t pos) {
  const auto prev = previous_kl(state, pos);
  return prev && state.kl_history[pos] > *prev;
}

std::size_t trailing_increases(const SelectionState& state) {
  std::size_t count = 0;
  for (std::size_t pos = state.kl_history.size(); pos-- > 0;) {
    if (!increased_at(state, pos)) break;
    ++count;
  }
  return count;
}

bool fires_on_increase(StopKind kind) {
  return kind == StopKind::Increase || kind == StopKind::MinDifference || kind == StopKind::SequentialIncrease ||
         kind == StopKind::MaxResets;
}

StopReason reason_for(StopKind kind) {
  switch (kind) {
    case StopKind::Increase: return StopReason::Increase;
    case StopKind::MinDifference: return StopReason::MinDifference;
    case StopKind::MinKl: return StopReason::MinKl;
    case StopKind::DataSize: return StopReason::DataSize;
    case StopKind::SequentialIncrease: return StopReason::SequentialIncrease;
    case StopKind::MaxResets: return StopReason::MaxResets;
  }
  return StopReason::Increase;
}

std::size_t data_size_cap(const StoppingCriterion& c, std::size_t total) {
  return static_cast<std::size_t>(std::llround(c.max_data_fraction * static_cast<double>(total)));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void CandidatePool::remove(std::size_t i) {
  if (available_.at(i)) {
    available_[i] = 0;
    --count_;
  }
}

void CandidatePool::insert(std::size_t i) {
  if (!available_.at(i)) {
    available_[i] = 1;
    ++count_;
  }
}

void CandidatePool::restore_all() {
  std::fill(available_.begin(), available_.end(), std::uint8_t{1});
  count_ = available_.size();
}

std::size_t nearest_candidate(std::span<const double> v, const CandidatePool& remaining, PointsView centroids) {
  if (remaining.empty()) throw DataError("no remaining candidates to choose from");
  if (remaining.total() != centroids.size()) throw DataError("candidate pool does not match centroid count");
  if (v.size() != centroids.dim) throw DataError("v has the wrong dimension");
  const auto mask = remaining.mask();
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = centroids.size();
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    if (!mask[i]) continue;
    const double sq = squared_distance(v, centroids.row(i));
    if (sq < best) {
      best = sq;
      arg = i;
    }
  }
  return arg;
}

StopDecision should_stop(const StoppingCriterion& criterion, const SelectionState& state,
                         std::size_t total_candidates) {
  if (state.kl_history.empty() && criterion.kind != StopKind::DataSize) return StopDecision::proceed();

  bool fired = false;
  const std::size_t last = state.kl_history.empty() ? 0 : state.kl_history.size() - 1;
  switch (criterion.kind) {
    case StopKind::Increase:
    case StopKind::MaxResets:
      fired = increased_at(state, last);
      break;
    case StopKind::MinDifference: {
      const auto prev = previous_kl(state, last);
      fired = prev && (*prev - state.kl_history[last]) < criterion.min_difference;
      break;
    }
    case StopKind::MinKl:
      fired = criterion.min_kl && state.kl_history[last] <= *criterion.min_kl;
      break;
    case StopKind::DataSize:
      fired = state.preselected + state.selected.size() >= data_size_cap(criterion, total_candidates);
      break;
    case StopKind::SequentialIncrease:
      fired = trailing_increases(state) >= criterion.max_sequential_increases;
      break;
  }
  if (!fired) return StopDecision::proceed();
  const StopReason reason = reason_for(criterion.kind);
  if (fires_on_increase(criterion.kind) && criterion.resets_allowed && state.resets_used < criterion.max_resets) {
    return StopDecision::reset(reason);
  }
  return StopDecision::stop(reason);
}

VectorDataset make_uniform_start(const UniformStartConfig& cfg, std::size_t dim, SeededRng& rng) {
  cfg.validate();
  std::vector<double> values;
  values.reserve(cfg.size * dim);
  for (std::size_t i = 0; i < cfg.size * dim; ++i) values.push_back(rng.uniform(cfg.low, cfg.high));
  VectorDataset ds(dim, std::move(values));
  return cfg.normalize && !ds.empty() ? normalize_rows(ds) : ds;
}

SelectionReport run_gio(const VectorDataset& x_centroids, const VectorDataset& g_centroids, const InitStrategy& init,
                        const GioConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  cfg.validate();
  if (g_centroids.empty()) throw DataError("candidate set is empty");
  if (x_centroids.dim() != g_centroids.dim()) {
    throw DataError("target dim " + std::to_string(x_centroids.dim()) + " differs from candidate dim " +
                    std::to_string(g_centroids.dim()));
  }
  if (x_centroids.size() < cfg.l + 1) {
    throw DataError("target set needs at least l + 1 = " + std::to_string(cfg.l + 1) + " points, have " +
                    std::to_string(x_centroids.size()));
  }

  const std::size_t dim = x_centroids.dim();
  const SeededRng root(cfg.seed);
  SeededRng jump_rng = root.child("jump");
  SeededRng restart_rng = root.child("restart");

  SelectionReport report;
  SelectionState state;
  state.remaining = CandidatePool(g_centroids.size());

  // Reference set: uniform start, then subset or explicit points, then acquisitions.
  std::vector<double> reference;
  if (const auto* u = std::get_if<UniformInit>(&init)) {
    SeededRng rng = root.child("uniform");
    const auto start = make_uniform_start(u->uniform, dim, rng);
    reference.assign(start.values().begin(), start.values().end());
  } else if (const auto* s = std::get_if<SubsetInit>(&init)) {
    SeededRng rng = root.child("subset");
    report.initial = random_subset_indices(g_centroids.size(), s->fraction, rng).chosen;
    for (const auto i : report.initial) {
      const auto p = g_centroids.point(i);
      reference.insert(reference.end(), p.begin(), p.end());
      state.remaining.remove(i);
    }
  } else if (const auto* e = std::get_if<ExplicitInit>(&init)) {
    if (!e->points.empty() && e->points.dim() != dim) throw DataError("initial set has the wrong dimension");
    reference.assign(e->points.values().begin(), e->points.values().end());
  }
  state.preselected = report.initial.size();
  auto ref_view = [&] { return PointsView{reference, dim}; };

  if (cfg.discard_nearest && reference.empty()) {
    throw ConfigError("discard_nearest needs a non-empty starting set (uniform, subset or file init)");
  }

  const AveragedKl objective(x_centroids, cfg.l, cfg.discard_nearest);
  const std::size_t min_ref = cfg.discard_nearest ? 2 : 1;
  if (ref_view().size() >= min_ref) state.baseline_kl = objective.evaluate(ref_view());
  report.baseline_kl = state.baseline_kl;

  const std::size_t total = g_centroids.size();
  std::optional<StopReason> reason;
  std::size_t iter = 0;
  while (!reason && iter < cfg.max_iter) {
    if (cfg.stop.kind == StopKind::DataSize &&
        state.preselected + state.selected.size() >= data_size_cap(cfg.stop, total)) {
      reason = StopReason::DataSize;
      break;
    }
    if (state.remaining.empty()) {
      if (cfg.stop.resets_allowed && state.resets_used < cfg.stop.max_resets) {
        state.remaining.restore_all();
        ++state.resets_used;
      } else {
        reason = StopReason::Exhausted;
        break;
      }
    }
    ++iter;

    Vector v0 = init_v(cfg.descent.v_init, x_centroids, state.prev_v_opt, jump_rng);
    const auto descent = descend(objective, ref_view(), std::move(v0), cfg.descent, restart_rng);
    state.prev_v_opt = descent.v_opt;

    const std::size_t best = nearest_candidate(descent.v_opt, state.remaining, g_centroids);
    const auto candidate = g_centroids.point(best);
    const double kl = objective.evaluate_with(ref_view(), candidate);

    state.selected.push_back(best);
    state.kl_history.push_back(kl);
    state.remaining.remove(best);
    const StopDecision decision = should_stop(cfg.stop, state, total);

    const bool rejected = decision.action != StopDecision::Action::Continue && fires_on_increase(cfg.stop.kind) &&
                          increased_at(state, state.kl_history.size() - 1);
    if (rejected) {
      // The acquisition that raised the divergence is not kept.
      state.selected.pop_back();
      state.kl_history.pop_back();
      state.remaining.insert(best);
      if (decision.action == StopDecision::Action::Stop) report.rejected_kl = kl;
    } else {
      reference.insert(reference.end(), candidate.begin(), candidate.end());
    }

    if (decision.action == StopDecision::Action::Reset) {
      state.remaining.restore_all();
      ++state.resets_used;
    } else if (decision.action == StopDecision::Action::Stop) {
      reason = decision.reason;
    }
  }

  report.acquired = std::move(state.selected);
  report.kl_history = std::move(state.kl_history);
  report.resets_used = state.resets_used;
  report.iterations = iter;
  report.reason = reason.value_or(StopReason::MaxIter);
  report.timings["select"] = seconds_since(started);
  return report;
}

}  // namespace gio
