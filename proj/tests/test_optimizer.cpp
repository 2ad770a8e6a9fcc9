#include <cmath>

#include "doctest.h"
#include "gio/error.hpp"
#include "gio/optimizer.hpp"
#include "oracles.hpp"

using namespace gio;

namespace {

Vector to_vec(std::span<const double> s) { return Vector(s.begin(), s.end()); }

}  // namespace

TEST_CASE("auto scaling moves exactly lr per step") {
  SeededRng rng(50);
  const auto x = oracle::gaussian(rng, 50, 2, 3.0, 0.7);
  const AveragedKl obj(x, 5);
  DescentConfig cfg;
  cfg.iters = 1;
  cfg.lr = 0.25;
  const Vector v0{-5.0, -5.0};
  SeededRng r(0);
  const auto res = descend(obj, PointsView{{}, 2}, v0, cfg, r);
  CHECK(distance(res.v_opt, v0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(res.steps == 1);
}

TEST_CASE("descent from far away heads for the target cloud and lowers the divergence") {
  SeededRng rng(51);
  const auto x = oracle::gaussian(rng, 80, 2, 3.0, 0.7);
  const auto ref = oracle::uniform(rng, 10, 2, -10.0, 10.0);
  const AveragedKl obj(x, 5);
  DescentConfig cfg;
  cfg.lr = 0.1;
  cfg.iters = 200;
  const Vector v0{-4.0, 8.0};
  SeededRng r(0);
  const auto res = descend(obj, ref, v0, cfg, r);
  CHECK(res.final_kl < obj.evaluate_with(ref, v0));
  CHECK(distance(res.v_opt, x.mean()) < distance(v0, x.mean()) - 5.0);
  CHECK(res.final_kl == doctest::Approx(obj.evaluate_with(ref, res.v_opt)));
}

TEST_CASE("unscaled steps follow the raw gradient") {
  SeededRng rng(52);
  const auto x = oracle::gaussian(rng, 30, 3);
  const auto ref = oracle::gaussian(rng, 5, 3);
  const AveragedKl obj(x, 2);
  DescentConfig cfg;
  cfg.scale = ScaleMode::None;
  cfg.iters = 1;
  cfg.lr = 0.5;
  const Vector v0{1.0, 0.5, -0.5};
  const auto g = obj.gradient(ref, v0);
  SeededRng r(0);
  const auto res = descend(obj, ref, v0, cfg, r);
  for (std::size_t j = 0; j < 3; ++j) CHECK(res.v_opt[j] == doctest::Approx(v0[j] - 0.5 * g[j]).epsilon(1e-14));
}

TEST_CASE("restart probability triples the budget") {
  SeededRng rng(53);
  const auto x = oracle::gaussian(rng, 20, 2);
  const AveragedKl obj(x, 1);
  DescentConfig cfg;
  cfg.iters = 4;
  cfg.restart_prob = 1.0;
  SeededRng r(0);
  CHECK(descend(obj, PointsView{{}, 2}, Vector{3.0, 3.0}, cfg, r).steps == 12);
  cfg.restart_prob = 0.0;
  CHECK(descend(obj, PointsView{{}, 2}, Vector{3.0, 3.0}, cfg, r).steps == 4);
}

TEST_CASE("v initialisation modes") {
  const auto x = VectorDataset::from_rows({{0, 0}, {2, 0}, {4, 6}});
  SeededRng rng(54);
  CHECK(init_v(VInit::Mean, x, Vector{9, 9}, rng) == Vector{2, 2});
  CHECK(init_v(VInit::PrevOpt, x, Vector{9, 9}, rng) == Vector{9, 9});
  CHECK(init_v(VInit::PrevOpt, x, std::nullopt, rng) == Vector{2, 2});
  for (int i = 0; i < 20; ++i) {
    const auto v = init_v(VInit::Jump, x, std::nullopt, rng);
    bool member = false;
    for (std::size_t r = 0; r < x.size(); ++r) member = member || v == to_vec(x.point(r));
    CHECK(member);
  }
}

TEST_CASE("blow-ups are reported as numeric errors") {
  const auto x = VectorDataset::from_rows({{0.0}, {1.0}, {2.0}});
  const AveragedKl obj(x, 1);
  DescentConfig cfg;
  cfg.scale = ScaleMode::None;
  cfg.lr = 1e300;
  SeededRng r(0);
  CHECK_THROWS_AS(descend(obj, PointsView{{}, 1}, Vector{1e-10}, cfg, r), NumericError);
}

TEST_CASE("descent configuration validation") {
  DescentConfig cfg;
  cfg.lr = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DescentConfig{};
  cfg.iters = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DescentConfig{};
  cfg.restart_prob = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(parse_v_init("prev_opt") == VInit::PrevOpt);
  CHECK(to_string(ScaleMode::None) == "none");
  CHECK_THROWS_AS(parse_scale_mode("linear"), ConfigError);
}
