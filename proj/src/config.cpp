#include "gio/config.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

#include "gio/error.hpp"

namespace gio {

StopKind parse_stop_kind(std::string_view name) {
  if (name == "increase") return StopKind::Increase;
  if (name == "min_difference") return StopKind::MinDifference;
  if (name == "min_kl") return StopKind::MinKl;
  if (name == "data_size" || name == "max_data_size") return StopKind::DataSize;
  if (name == "seq_increase" || name == "sequential_increase_tolerance") return StopKind::SequentialIncrease;
  if (name == "max_resets") return StopKind::MaxResets;
  throw ConfigError("unknown stopping criterion '" + std::string(name) + "'");
}

std::string_view to_string(StopKind kind) {
  switch (kind) {
    case StopKind::Increase: return "increase";
    case StopKind::MinDifference: return "min_difference";
    case StopKind::MinKl: return "min_kl";
    case StopKind::DataSize: return "data_size";
    case StopKind::SequentialIncrease: return "seq_increase";
    case StopKind::MaxResets: return "max_resets";
  }
  return "increase";
}

void StoppingCriterion::validate() const {
  if (kind == StopKind::MinKl && !min_kl) throw ConfigError("--min-kl is required with --stop min_kl");
  if (kind != StopKind::MinKl && min_kl) throw ConfigError("--min-kl is only valid with --stop min_kl");
  if (kind == StopKind::MinKl && !std::isfinite(*min_kl)) throw ConfigError("--min-kl must be finite");
  if (!(max_data_fraction > 0.0 && max_data_fraction <= 1.0)) {
    throw ConfigError("max data fraction must lie in (0, 1]");
  }
  if (max_sequential_increases < 1) throw ConfigError("max sequential increases must be >= 1");
  if (!std::isfinite(min_difference)) throw ConfigError("min difference must be finite");
  if (kind == StopKind::MaxResets && !resets_allowed) {
    throw ConfigError("--stop max_resets requires --resets-allowed");
  }
}

void UniformStartConfig::validate() const {
  if (size > 0 && !(low < high)) throw ConfigError("uniform start needs low < high");
}

InitSpec InitSpec::parse(std::string_view text) {
  InitSpec spec;
  if (text == "none") {
    spec.mode = InitMode::None;
  } else if (text == "uniform") {
    spec.mode = InitMode::Uniform;
  } else if (text.starts_with("subset=")) {
    spec.mode = InitMode::Subset;
    const auto num = text.substr(7);
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), spec.fraction);
    if (num.empty() || ec != std::errc() || ptr != num.data() + num.size() ||
        !(spec.fraction >= 0.0 && spec.fraction <= 1.0)) {
      throw ConfigError("--init subset=F needs a fraction in [0, 1], got '" + std::string(num) + "'");
    }
  } else if (text.starts_with("file=")) {
    spec.mode = InitMode::File;
    spec.path = std::string(text.substr(5));
    if (spec.path.empty()) throw ConfigError("--init file=PATH needs a path");
  } else {
    throw ConfigError("unknown --init value '" + std::string(text) + "' (none, uniform, subset=F, file=PATH)");
  }
  return spec;
}

std::string InitSpec::to_string() const {
  switch (mode) {
    case InitMode::None: return "none";
    case InitMode::Uniform: return "uniform";
    case InitMode::Subset: {
      nlohmann::json j = fraction;
      return "subset=" + j.dump();
    }
    case InitMode::File: return "file=" + path;
  }
  return "none";
}

void GioConfig::validate() const {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (k_target && *k_target < 1) throw ConfigError("k_target must be >= 1");
  if (k_candidates && *k_candidates < 1) throw ConfigError("k_candidates must be >= 1");
  if (kmeans_max_iters < 1) throw ConfigError("kmeans iterations must be >= 1");
  if (!(kmeans_tol >= 0.0)) throw ConfigError("kmeans tolerance must be non-negative");
  if (l < 1) throw ConfigError("l must be >= 1");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  stop.validate();
  uniform.validate();
  descent.validate();
}

void to_json(nlohmann::json& j, const GioConfig& cfg) {
  j = nlohmann::json{
      {"k", cfg.k},
      {"k_target", cfg.target_k()},
      {"k_candidates", cfg.candidate_k()},
      {"kmeans_max_iters", cfg.kmeans_max_iters},
      {"kmeans_tol", cfg.kmeans_tol},
      {"l", cfg.l},
      {"max_iter", cfg.max_iter},
      {"discard_nearest", cfg.discard_nearest},
      {"stop", to_string(cfg.stop.kind)},
      {"min_difference", cfg.stop.min_difference},
      {"min_kl", cfg.stop.min_kl ? nlohmann::json(*cfg.stop.min_kl) : nlohmann::json(nullptr)},
      {"max_data_fraction", cfg.stop.max_data_fraction},
      {"max_seq_increases", cfg.stop.max_sequential_increases},
      {"resets_allowed", cfg.stop.resets_allowed},
      {"max_resets", cfg.stop.max_resets},
      {"init", cfg.init.to_string()},
      {"uniform_size", cfg.uniform.size},
      {"uniform_low", cfg.uniform.low},
      {"uniform_high", cfg.uniform.high},
      {"uniform_normalize", cfg.uniform.normalize},
      {"v_init", to_string(cfg.descent.v_init)},
      {"lr", cfg.descent.lr},
      {"grad_desc_iter", cfg.descent.iters},
      {"scale", to_string(cfg.descent.scale)},
      {"restart_prob", cfg.descent.restart_prob},
      {"seed", cfg.seed},
  };
}

void from_json(const nlohmann::json& j, GioConfig& cfg) {
  cfg = GioConfig{};
  cfg.k = j.at("k").get<std::size_t>();
  cfg.k_target = j.at("k_target").get<std::size_t>();
  cfg.k_candidates = j.at("k_candidates").get<std::size_t>();
  cfg.kmeans_max_iters = j.at("kmeans_max_iters").get<std::size_t>();
  cfg.kmeans_tol = j.at("kmeans_tol").get<double>();
  cfg.l = j.at("l").get<std::size_t>();
  cfg.max_iter = j.at("max_iter").get<std::size_t>();
  cfg.discard_nearest = j.at("discard_nearest").get<bool>();
  cfg.stop.kind = parse_stop_kind(j.at("stop").get<std::string>());
  cfg.stop.min_difference = j.at("min_difference").get<double>();
  if (!j.at("min_kl").is_null()) cfg.stop.min_kl = j.at("min_kl").get<double>();
  cfg.stop.max_data_fraction = j.at("max_data_fraction").get<double>();
  cfg.stop.max_sequential_increases = j.at("max_seq_increases").get<std::size_t>();
  cfg.stop.resets_allowed = j.at("resets_allowed").get<bool>();
  cfg.stop.max_resets = j.at("max_resets").get<std::size_t>();
  cfg.init = InitSpec::parse(j.at("init").get<std::string>());
  cfg.uniform.size = j.at("uniform_size").get<std::size_t>();
  cfg.uniform.low = j.at("uniform_low").get<double>();
  cfg.uniform.high = j.at("uniform_high").get<double>();
  cfg.uniform.normalize = j.at("uniform_normalize").get<bool>();
  cfg.descent.v_init = parse_v_init(j.at("v_init").get<std::string>());
  cfg.descent.lr = j.at("lr").get<double>();
  cfg.descent.iters = j.at("grad_desc_iter").get<std::size_t>();
  cfg.descent.scale = parse_scale_mode(j.at("scale").get<std::string>());
  cfg.descent.restart_prob = j.at("restart_prob").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  // The thread count never changes results and is left out of the echo.
  cfg.threads = j.value("threads", 0);
}

}  // namespace gio
