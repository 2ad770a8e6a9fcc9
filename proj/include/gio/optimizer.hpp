#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "gio/dataset.hpp"
#include "gio/kl.hpp"
#include "gio/rng.hpp"

namespace gio {

// auto: the gradient is rescaled to unit length so every step moves exactly lr.
// none: the raw gradient is multiplied by lr.
enum class ScaleMode { Auto, None };
enum class VInit { Mean, PrevOpt, Jump };

ScaleMode parse_scale_mode(std::string_view name);
std::string_view to_string(ScaleMode mode);
VInit parse_v_init(std::string_view name);
std::string_view to_string(VInit mode);

struct DescentConfig {
  double lr = 0.01;
  std::size_t iters = 50;
  ScaleMode scale = ScaleMode::Auto;
  VInit v_init = VInit::PrevOpt;
  // Chance per descent call of tripling the iteration budget.
  double restart_prob = 0.0;

  void validate() const;
};

// mean: component-wise mean of x. prev_opt: prev_opt when present, else the
// mean. jump: a uniformly drawn element of x.
Vector init_v(VInit mode, const VectorDataset& x, const std::optional<Vector>& prev_opt, SeededRng& rng);

struct DescentResult {
  Vector v_opt;
  double final_kl = 0.0;
  std::size_t steps = 0;
};

// Fixed-step gradient descent of kl(x || ref + {v}) in v.
DescentResult descend(const AveragedKl& objective, PointsView ref, Vector v0, const DescentConfig& cfg, SeededRng& rng);
DescentResult descend(const VectorDataset& x, PointsView ref, Vector v0, const DescentConfig& cfg, std::size_t l,
                      SeededRng& rng);

}  // namespace gio
