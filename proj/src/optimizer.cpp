#include "gio/optimizer.hpp"

#include <cmath>
#include <string>

#include "gio/error.hpp"

namespace gio {

ScaleMode parse_scale_mode(std::string_view name) {
  if (name == "auto") return ScaleMode::Auto;
  if (name == "none") return ScaleMode::None;
  throw ConfigError("unknown scale mode '" + std::string(name) + "' (expected auto or none)");
}

std::string_view to_string(ScaleMode mode) { return mode == ScaleMode::Auto ? "auto" : "none"; }

VInit parse_v_init(std::string_view name) {
  if (name == "mean") return VInit::Mean;
  if (name == "prev_opt") return VInit::PrevOpt;
  if (name == "jump") return VInit::Jump;
  throw ConfigError("unknown v-init '" + std::string(name) + "' (expected mean, prev_opt or jump)");
}

std::string_view to_string(VInit mode) {
  switch (mode) {
    case VInit::Mean: return "mean";
    case VInit::PrevOpt: return "prev_opt";
    case VInit::Jump: return "jump";
  }
  return "mean";
}

void DescentConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be positive");
  if (iters < 1) throw ConfigError("gradient descent iterations must be >= 1");
  if (!(restart_prob >= 0.0 && restart_prob <= 1.0)) throw ConfigError("restart probability must lie in [0, 1]");
}

Vector init_v(VInit mode, const VectorDataset& x, const std::optional<Vector>& prev_opt, SeededRng& rng) {
  if (x.empty()) throw DataError("cannot initialize v from an empty target set");
  switch (mode) {
    case VInit::PrevOpt:
      if (prev_opt) return *prev_opt;
      return x.mean();
    case VInit::Jump: {
      const auto p = x.point(static_cast<std::size_t>(rng.below(x.size())));
      return Vector(p.begin(), p.end());
    }
    case VInit::Mean:
      break;
  }
  return x.mean();
}

DescentResult descend(const AveragedKl& objective, PointsView ref, Vector v0, const DescentConfig& cfg, SeededRng& rng) {
  cfg.validate();
  if (v0.size() != objective.target().dim()) throw DataError("v0 has the wrong dimension");
  for (const double c : v0) {
    if (!std::isfinite(c)) throw NumericError("v0 is not finite");
  }

  std::size_t budget = cfg.iters;
  if (cfg.restart_prob > 0.0 && rng.uniform() < cfg.restart_prob) budget *= 3;

  const auto prepared = objective.prepare(ref);
  Vector v = std::move(v0);
  for (std::size_t step = 0; step < budget; ++step) {
    const Vector g = objective.gradient(prepared, v);
    double factor = cfg.lr;
    if (cfg.scale == ScaleMode::Auto) {
      double norm = 0.0;
      for (const double gj : g) norm += gj * gj;
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      factor = cfg.lr / norm;
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] -= factor * g[j];
      if (!std::isfinite(v[j])) {
        throw NumericError("gradient descent produced a non-finite v at iteration " + std::to_string(step) +
                           " (learning rate too large?)");
      }
    }
  }
  DescentResult out;
  out.final_kl = objective.evaluate_with(ref, v);
  out.v_opt = std::move(v);
  out.steps = budget;
  return out;
}

DescentResult descend(const VectorDataset& x, PointsView ref, Vector v0, const DescentConfig& cfg, std::size_t l,
                      SeededRng& rng) {
  return descend(AveragedKl(x, l), ref, std::move(v0), cfg, rng);
}

}  // namespace gio
