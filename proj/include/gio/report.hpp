#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace gio {

enum class StopReason { Increase, MinDifference, MinKl, DataSize, SequentialIncrease, MaxResets, Exhausted, MaxIter };

std::string_view to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view name);

// Outcome of one selection run over candidate centroids.
struct SelectionReport {
  std::string method = "gio";
  // Candidate indices placed in the selection before the loop (subset init).
  std::vector<std::size_t> initial;
  // Candidate indices added by the loop, in acquisition order. May repeat
  // after a reset.
  std::vector<std::size_t> acquired;
  // Divergence after each acquisition; same length as `acquired`.
  std::vector<double> kl_history;
  // Divergence of the starting reference set, when it is non-empty.
  std::optional<double> baseline_kl;
  // Divergence of the trial that ended the run by raising it. That candidate
  // is not part of the selection.
  std::optional<double> rejected_kl;
  StopReason reason = StopReason::MaxIter;
  std::size_t resets_used = 0;
  std::size_t iterations = 0;
  // Wall time per phase in seconds.
  std::map<std::string, double> timings;

  std::vector<std::size_t> selected() const;
};

void to_json(nlohmann::json& j, const SelectionReport& r);
void from_json(const nlohmann::json& j, SelectionReport& r);

}  // namespace gio
