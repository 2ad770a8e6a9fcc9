#include "gio/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "gio/baselines.hpp"
#include "gio/error.hpp"
#include "gio/kl.hpp"
#include "gio/quantizer.hpp"
#include "gio/selector.hpp"

namespace gio {
namespace {

using Clock = std::chrono::steady_clock;

VectorDataset gaussian_cloud(SeededRng rng, std::size_t n, const Vector& mean, double variance) {
  const double sd = std::sqrt(variance);
  std::vector<double> values;
  values.reserve(n * mean.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (const double mu : mean) values.push_back(rng.normal(mu, sd));
  }
  return VectorDataset(mean.size(), std::move(values));
}

VectorDataset uniform_box(SeededRng rng, std::size_t n, std::size_t dim, double low, double high) {
  std::vector<double> values(n * dim);
  for (auto& v : values) v = rng.uniform(low, high);
  return VectorDataset(dim, std::move(values));
}

VectorDataset ring(SeededRng rng, std::size_t n, double radius) {
  std::vector<double> values;
  values.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    values.push_back(radius * std::cos(theta));
    values.push_back(radius * std::sin(theta));
  }
  return VectorDataset(2, std::move(values));
}

// Settings of the published 2D check scripts: package-default v init (mean),
// l = 5, increase criterion, no quantization.
GioConfig analytic_config(std::uint64_t seed) {
  GioConfig cfg;
  cfg.seed = seed;
  cfg.descent.v_init = VInit::Mean;
  return cfg;
}

UniformInit box_start(std::size_t size, double low, double high) {
  UniformStartConfig u;
  u.size = size;
  u.low = low;
  u.high = high;
  u.normalize = false;
  return UniformInit{u};
}

double seconds(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

class Artifacts {
 public:
  Artifacts(const CheckOptions& options, std::string_view name, CheckResult& result) : result_(result) {
    if (options.out_dir) {
      dir_ = *options.out_dir / std::string(name);
      std::filesystem::create_directories(*dir_);
    }
  }

  void scatter(const std::string& file, const std::vector<std::pair<std::string, const VectorDataset*>>& groups) {
    if (!dir_) return;
    std::ofstream out(*dir_ / file);
    out << "role,x,y\n";
    for (const auto& [role, ds] : groups) {
      for (std::size_t i = 0; i < ds->size(); ++i) {
        const auto p = ds->point(i);
        out << role << ',' << format_double(p[0]) << ',' << format_double(p.size() > 1 ? p[1] : 0.0) << '\n';
      }
    }
    result_.artifacts.push_back(*dir_ / file);
  }

  void curve(const std::string& file, const std::vector<double>& kl) {
    if (!dir_) return;
    std::ofstream out(*dir_ / file);
    out << "iteration,kl\n";
    for (std::size_t i = 0; i < kl.size(); ++i) out << i + 1 << ',' << format_double(kl[i]) << '\n';
    result_.artifacts.push_back(*dir_ / file);
  }

  void table(const std::string& file, const std::string& header, const std::vector<std::string>& rows) {
    if (!dir_) return;
    std::ofstream out(*dir_ / file);
    out << header << '\n';
    for (const auto& r : rows) out << r << '\n';
    result_.artifacts.push_back(*dir_ / file);
  }

 private:
  CheckResult& result_;
  std::optional<std::filesystem::path> dir_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

CheckResult self_consistency(std::uint64_t seed, const CheckOptions& options) {
  CheckResult r;
  r.name = "self_consistency";
  Artifacts art(options, r.name, r);
  const SeededRng root(seed);
  const auto x = gaussian_cloud(root.child("target"), 100, {3.0, 4.0}, 0.5);
  const auto g = gaussian_cloud(root.child("candidates"), 100, {3.0, 4.0}, 0.5);
  const auto start = Clock::now();
  const auto report = run_gio(x, g, box_start(100, 0.0, 8.0), analytic_config(seed));
  const double runtime = seconds(start);
  const double fraction = static_cast<double>(report.acquired.size()) / static_cast<double>(g.size());
  r.metrics = {{"selected_fraction", fraction},
               {"selected", static_cast<double>(report.acquired.size())},
               {"runtime_s", runtime}};
  r.pass = fraction >= kSelfConsistencyMinFraction;
  r.summary = "selected " + fmt(100.0 * fraction) + "% of G (need >= " + fmt(100.0 * kSelfConsistencyMinFraction) + "%)";
  const auto chosen = g.subset(report.acquired);
  art.scatter("scatter.csv", {{"target", &x}, {"candidate", &g}, {"selected", &chosen}});
  art.curve("kl_curve.csv", report.kl_history);
  return r;
}

CheckResult negative_consistency(std::uint64_t seed, const CheckOptions& options) {
  CheckResult r;
  r.name = "negative_consistency";
  Artifacts art(options, r.name, r);
  const SeededRng root(seed);
  const auto x = gaussian_cloud(root.child("target"), 100, {3.0, 4.0}, 0.5);
  const auto g = gaussian_cloud(root.child("candidates"), 100, {300.0, 400.0}, 0.5);
  const auto report = run_gio(x, g, box_start(100, 0.0, 8.0), analytic_config(seed));
  r.metrics = {{"selected", static_cast<double>(report.acquired.size())}};
  r.pass = report.acquired.empty();
  r.summary = "selected " + std::to_string(report.acquired.size()) + " far points (need 0)";
  art.scatter("scatter.csv", {{"target", &x}, {"candidate", &g}});
  art.curve("kl_curve.csv", report.kl_history);
  return r;
}

CheckResult quantization_consistency(std::uint64_t seed, const CheckOptions& options) {
  CheckResult r;
  r.name = "quantization_consistency";
  Artifacts art(options, r.name, r);
  const SeededRng root(seed);
  const auto x = gaussian_cloud(root.child("target"), 400, {3.0, 4.0}, 0.5);
  SeededRng km_rng = root.child("kmeans");
  const auto model = kmeans(x, 50, km_rng);
  const auto far = gaussian_cloud(root.child("far"), 50, {300.0, 400.0}, 0.5);
  const double kl_quant = kl_averaged(x, model.centroids, 5);
  const double kl_far = kl_averaged(x, far, 5);
  const double ratio = kl_quant / kl_far;
  r.metrics = {{"kl_quantized", kl_quant}, {"kl_far", kl_far}, {"ratio", ratio}};
  r.pass = kl_quant >= kQuantizationKlLow && kl_quant <= kQuantizationKlHigh && ratio < kQuantizationMaxRatio;
  r.summary = "KL(X || X_quant) = " + fmt(kl_quant) + ", ratio to far cloud = " + fmt(ratio);
  art.scatter("scatter.csv", {{"original", &x}, {"centroid", &model.centroids}});
  return r;
}

CheckResult derivative_speedup(std::uint64_t seed, const CheckOptions& options) {
  CheckResult r;
  r.name = "derivative_speedup";
  Artifacts art(options, r.name, r);
  const std::size_t iters = options.fast ? 25 : 100;
  const std::size_t scaling_iters = options.fast ? 4 : 10;

  const auto gio_small = bench_selection("gio", 2000, iters, seed, 3);
  const auto naive_small = bench_selection("naive", 2000, iters, seed);
  const double speedup = naive_small.seconds / gio_small.seconds;

  const auto gio_large = bench_selection("gio", 8000, iters, seed, 3);
  const auto naive_scaling_small = bench_selection("naive", 2000, scaling_iters, seed);
  const auto naive_scaling_large = bench_selection("naive", 8000, scaling_iters, seed);
  const double gio_growth = gio_large.per_iteration() / gio_small.per_iteration();
  const double naive_growth = naive_scaling_large.per_iteration() / naive_scaling_small.per_iteration();

  r.metrics = {{"gio_seconds", gio_small.seconds},
               {"naive_seconds", naive_small.seconds},
               {"speedup", speedup},
               {"gio_growth_2000_to_8000", gio_growth},
               {"naive_growth_2000_to_8000", naive_growth},
               {"iterations", static_cast<double>(iters)}};
  r.pass = speedup >= kMinSpeedup && gio_growth <= kMaxGioGrowth && naive_growth >= kMinNaiveGrowth;
  r.summary = "naive/GIO = " + fmt(speedup) + "x; per-iteration growth 2000->8000: GIO " + fmt(gio_growth) +
              "x, naive " + fmt(naive_growth) + "x";
  std::vector<std::string> rows;
  for (const auto* row : {&gio_small, &naive_small, &gio_large, &naive_scaling_small, &naive_scaling_large}) {
    rows.push_back(to_csv(*row));
  }
  art.table("bench.csv", kBenchHeader, rows);
  return r;
}

double inside_fraction(const VectorDataset& points, double radius) {
  if (points.empty()) return 0.0;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    if (std::hypot(p[0], p[1]) < radius) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(points.size());
}

CheckResult circle_vs_similarity(std::uint64_t seed, const CheckOptions& options) {
  CheckResult r;
  r.name = "circle_vs_similarity";
  Artifacts art(options, r.name, r);
  const SeededRng root(seed);
  constexpr double kRadius = 2.0;
  const auto x = ring(root.child("target"), 100, kRadius);
  const auto g = uniform_box(root.child("candidates"), 2000, 2, -4.0, 4.0);
  const auto report = run_gio(x, g, box_start(100, -4.0, 4.0), analytic_config(seed));
  const auto gio_sel = g.subset(report.acquired);
  const auto sim_idx = similarity_search_select(x, g, report.acquired.size());
  const auto sim_sel = g.subset(sim_idx);
  const double gio_inside = inside_fraction(gio_sel, kRadius);
  const double sim_inside = inside_fraction(sim_sel, kRadius);
  r.metrics = {{"selected", static_cast<double>(report.acquired.size())},
               {"gio_inside_fraction", gio_inside},
               {"similarity_inside_fraction", sim_inside},
               {"margin", gio_inside - sim_inside}};
  r.pass = !report.acquired.empty() && gio_inside - sim_inside >= kMinInsideMargin;
  r.summary = "inside-ring fraction: GIO " + fmt(gio_inside) + ", similarity search " + fmt(sim_inside) + " over " +
              std::to_string(report.acquired.size()) + " points";
  art.scatter("gio.csv", {{"target", &x}, {"selected", &gio_sel}});
  art.scatter("similarity.csv", {{"target", &x}, {"selected", &sim_sel}});
  art.curve("kl_curve.csv", report.kl_history);
  return r;
}

double variance(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0.0;
  for (const double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size());
}

// Several well-separated modes, in the spirit of image-class embeddings.
VectorDataset multimodal(SeededRng rng, const VectorDataset& modes, std::size_t n, double sd) {
  std::vector<double> values;
  values.reserve(n * modes.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = modes.point(static_cast<std::size_t>(rng.below(modes.size())));
    for (const double mu : c) values.push_back(rng.normal(mu, sd));
  }
  return VectorDataset(modes.dim(), std::move(values));
}

CheckResult uniform_smoothing(std::uint64_t seed, const CheckOptions& options) {
  CheckResult r;
  r.name = "uniform_smoothing";
  Artifacts art(options, r.name, r);
  const SeededRng root(seed);

  // The optimum of v does not move when uniform points are in the reference set.
  const auto x2 = gaussian_cloud(root.child("unimodal"), 200, {3.0, 4.0}, 0.5);
  SeededRng box_rng = root.child("uniform-reference");
  const auto uniform_ref = make_uniform_start(box_start(100, 0.0, 8.0).uniform, 2, box_rng);
  const AveragedKl objective(x2, 5);
  Vector v0 = x2.mean();
  v0[0] += 1.0;
  v0[1] -= 1.0;
  DescentConfig dcfg;
  SeededRng r1 = root.child("restart");
  SeededRng r2 = root.child("restart");
  const auto with_uniform = descend(objective, uniform_ref, v0, dcfg, r1);
  const auto floor_only = descend(objective, PointsView{{}, 2}, v0, dcfg, r2);
  const double shift = distance(with_uniform.v_opt, floor_only.v_opt);

  // Early KL trajectory with and without a uniform start.
  constexpr std::size_t kDim = 8;
  static constexpr std::size_t kEarly = 10;
  const auto modes = uniform_box(root.child("modes"), 10, kDim, -1.0, 1.0);
  const auto x = multimodal(root.child("target"), modes, 200, 0.15);
  const auto g = multimodal(root.child("candidates"), modes, 1000, 0.15);
  GioConfig cfg;
  cfg.seed = seed;
  cfg.descent.v_init = VInit::Jump;
  cfg.stop.kind = StopKind::DataSize;
  cfg.stop.max_data_fraction = 0.1;
  UniformStartConfig ucfg;
  ucfg.size = 20;
  ucfg.normalize = false;
  const auto smooth = run_gio(x, g, UniformInit{ucfg}, cfg);
  const auto rough = run_gio(x, g, NoInit{}, cfg);
  const auto early = [](const std::vector<double>& h) {
    return std::span<const double>(h.data(), std::min(h.size(), kEarly));
  };
  const double var_uniform = variance(early(smooth.kl_history));
  const double var_empty = variance(early(rough.kl_history));

  r.metrics = {{"v_opt_shift", shift},
               {"early_variance_uniform", var_uniform},
               {"early_variance_empty", var_empty}};
  r.pass = shift <= kMaxUniformShift && smooth.kl_history.size() >= kEarly && rough.kl_history.size() >= kEarly &&
           var_uniform < var_empty;
  r.summary = "v_opt shift " + fmt(shift) + "; early KL variance " + fmt(var_uniform) + " (uniform) vs " +
              fmt(var_empty) + " (empty)";
  art.curve("kl_uniform.csv", smooth.kl_history);
  art.curve("kl_empty.csv", rough.kl_history);
  return r;
}

}  // namespace

BenchRow bench_selection(std::string_view method, std::size_t candidates, std::size_t iters, std::uint64_t seed,
                         int repeats) {
  const SeededRng root(seed);
  const auto x = gaussian_cloud(root.child("target"), 100, {3.0, 4.0}, 0.5);
  const auto g = uniform_box(root.child("candidates").child(candidates), candidates, 2, 0.0, 8.0);
  const auto start_cfg = box_start(20, 0.0, 8.0);

  BenchRow row{std::string(method), candidates, 0, std::numeric_limits<double>::infinity()};
  for (int rep = 0; rep < std::max(repeats, 1); ++rep) {
    const auto start = Clock::now();
    if (method == "gio") {
      GioConfig cfg = analytic_config(seed);
      cfg.stop.kind = StopKind::DataSize;
      cfg.stop.max_data_fraction = std::min(1.0, static_cast<double>(iters) / static_cast<double>(candidates));
      cfg.max_iter = iters;
      row.iterations = run_gio(x, g, start_cfg, cfg).iterations;
    } else if (method == "naive") {
      // The uniform start run_gio would draw for the same seed.
      SeededRng rng = SeededRng(seed).child("uniform");
      const auto d0 = make_uniform_start(start_cfg.uniform, 2, rng);
      row.iterations = naive_hill_climb(x, g, d0, iters, 5).iterations;
    } else {
      throw ConfigError("unknown bench method '" + std::string(method) + "'");
    }
    row.seconds = std::min(row.seconds, seconds(start));
  }
  return row;
}

std::string to_csv(const BenchRow& row) {
  return row.method + "," + std::to_string(row.candidates) + "," + std::to_string(row.iterations) + "," +
         format_double(row.seconds);
}

CheckName parse_check_name(std::string_view name) {
  for (const auto c : all_checks()) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown check '" + std::string(name) + "'");
}

std::string_view to_string(CheckName name) {
  switch (name) {
    case CheckName::SelfConsistency: return "self_consistency";
    case CheckName::NegativeConsistency: return "negative_consistency";
    case CheckName::QuantizationConsistency: return "quantization_consistency";
    case CheckName::DerivativeSpeedup: return "derivative_speedup";
    case CheckName::CircleVsSimilarity: return "circle_vs_similarity";
    case CheckName::UniformSmoothing: return "uniform_smoothing";
  }
  return "self_consistency";
}

std::vector<CheckName> all_checks() {
  return {CheckName::SelfConsistency,    CheckName::NegativeConsistency, CheckName::QuantizationConsistency,
          CheckName::DerivativeSpeedup,  CheckName::CircleVsSimilarity,  CheckName::UniformSmoothing};
}

CheckResult run_check(CheckName name, std::uint64_t seed, const CheckOptions& options) {
  switch (name) {
    case CheckName::SelfConsistency: return self_consistency(seed, options);
    case CheckName::NegativeConsistency: return negative_consistency(seed, options);
    case CheckName::QuantizationConsistency: return quantization_consistency(seed, options);
    case CheckName::DerivativeSpeedup: return derivative_speedup(seed, options);
    case CheckName::CircleVsSimilarity: return circle_vs_similarity(seed, options);
    case CheckName::UniformSmoothing: return uniform_smoothing(seed, options);
  }
  return {};
}

}  // namespace gio
