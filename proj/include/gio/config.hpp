#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "gio/optimizer.hpp"

namespace gio {

enum class StopKind { Increase, MinDifference, MinKl, DataSize, SequentialIncrease, MaxResets };

StopKind parse_stop_kind(std::string_view name);
std::string_view to_string(StopKind kind);

struct StoppingCriterion {
  StopKind kind = StopKind::Increase;
  double min_difference = 0.0;
  std::optional<double> min_kl;
  double max_data_fraction = 1.0;
  std::size_t max_sequential_increases = 3;
  bool resets_allowed = false;
  std::size_t max_resets = 2;

  void validate() const;
};

struct UniformStartConfig {
  std::size_t size = 20;
  double low = -1.0;
  double high = 1.0;
  // Project every start point onto the unit sphere (for unit-norm embeddings).
  bool normalize = true;

  void validate() const;
};

enum class InitMode { None, Uniform, Subset, File };

struct InitSpec {
  InitMode mode = InitMode::Uniform;
  double fraction = 0.0;  // Subset
  std::string path;       // File

  // none | uniform | subset=F | file=PATH
  static InitSpec parse(std::string_view text);
  std::string to_string() const;
};

// Every knob of a selection run. Defaults follow the settings used for the
// large text experiments (k = 1500, l = 5, increase criterion, prev_opt).
struct GioConfig {
  std::size_t k = 1500;
  std::optional<std::size_t> k_target;
  std::optional<std::size_t> k_candidates;
  std::size_t kmeans_max_iters = 100;
  double kmeans_tol = 1e-4;

  std::size_t l = 5;
  std::size_t max_iter = 1000;
  bool discard_nearest = false;

  StoppingCriterion stop;
  InitSpec init;
  UniformStartConfig uniform;
  DescentConfig descent;

  std::uint64_t seed = 0;
  int threads = 0;

  std::size_t target_k() const { return k_target.value_or(k); }
  std::size_t candidate_k() const { return k_candidates.value_or(k); }

  // Cross-field validity; throws ConfigError.
  void validate() const;
};

void to_json(nlohmann::json& j, const GioConfig& cfg);
void from_json(const nlohmann::json& j, GioConfig& cfg);

}  // namespace gio
