#include "gio/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gio/baselines.hpp"
#include "gio/checks.hpp"
#include "gio/config.hpp"
#include "gio/error.hpp"
#include "gio/kl.hpp"
#include "gio/parallel.hpp"
#include "gio/quantizer.hpp"
#include "gio/selector.hpp"

#ifndef GIO_VERSION
#define GIO_VERSION "0.0.0"
#endif

namespace gio::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

// Values from a key = value file are applied to every option of `sub` that
// was not given on the command line. Keys may use '_' or '-'.
void apply_config_file(CLI::App& sub, const std::string& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  for (const auto& item : items) {
    if (!item.parents.empty()) throw ConfigError(path + ": sections are not supported ('" + item.fullname() + "')");
    std::string key = item.name;
    std::replace(key.begin(), key.end(), '_', '-');
    CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError(path + ": unknown key '" + item.name + "'");
    if (opt->count() > 0) continue;
    try {
      opt->add_result(item.inputs);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError(path + ": " + item.name + ": " + e.what());
    }
  }
}

std::string quote(const std::string& s) { return json(s).dump(); }

std::string config_file_text(const GioConfig& cfg) {
  std::ostringstream os;
  os << "k = " << cfg.k << '\n';
  if (cfg.k_target) os << "k-target = " << *cfg.k_target << '\n';
  if (cfg.k_candidates) os << "k-candidates = " << *cfg.k_candidates << '\n';
  os << "kmeans-max-iters = " << cfg.kmeans_max_iters << '\n'
     << "kmeans-tol = " << format_double(cfg.kmeans_tol) << '\n'
     << "l = " << cfg.l << '\n'
     << "max-iter = " << cfg.max_iter << '\n'
     << "discard-nearest = " << (cfg.discard_nearest ? "true" : "false") << '\n'
     << "stop = " << quote(std::string(to_string(cfg.stop.kind))) << '\n'
     << "min-difference = " << format_double(cfg.stop.min_difference) << '\n';
  if (cfg.stop.min_kl) os << "min-kl = " << format_double(*cfg.stop.min_kl) << '\n';
  os << "max-data-fraction = " << format_double(cfg.stop.max_data_fraction) << '\n'
     << "max-seq-increases = " << cfg.stop.max_sequential_increases << '\n'
     << "resets-allowed = " << (cfg.stop.resets_allowed ? "true" : "false") << '\n'
     << "max-resets = " << cfg.stop.max_resets << '\n'
     << "init = " << quote(cfg.init.to_string()) << '\n'
     << "uniform-size = " << cfg.uniform.size << '\n'
     << "uniform-low = " << format_double(cfg.uniform.low) << '\n'
     << "uniform-high = " << format_double(cfg.uniform.high) << '\n'
     << "uniform-normalize = " << (cfg.uniform.normalize ? "true" : "false") << '\n'
     << "v-init = " << quote(std::string(to_string(cfg.descent.v_init))) << '\n'
     << "lr = " << format_double(cfg.descent.lr) << '\n'
     << "grad-desc-iter = " << cfg.descent.iters << '\n'
     << "scale = " << quote(std::string(to_string(cfg.descent.scale))) << '\n'
     << "restart-prob = " << format_double(cfg.descent.restart_prob) << '\n'
     << "seed = " << cfg.seed << '\n';
  return os.str();
}

// Flags shared by select and baseline, bound straight into a GioConfig.
// Enumerations arrive as text and are parsed in finish().
struct RunArgs {
  std::string target;
  std::string candidates;
  std::string format = "vectors-csv";
  std::string out = "gio_out";
  std::string config;
  std::string stop = "increase";
  std::string init = "uniform";
  std::string v_init = "prev_opt";
  std::string scale = "auto";
  std::optional<double> min_kl;
  std::optional<std::size_t> k_target;
  std::optional<std::size_t> k_candidates;
  GioConfig cfg;

  void bind_common(CLI::App* sub) {
    sub->add_option("--target", target, "Target set X")->required();
    sub->add_option("--candidates", candidates, "Candidate pool G")->required();
    sub->add_option("--format", format, "vectors-csv | tabular-tsv")->capture_default_str();
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--config", config, "key = value file; flags take precedence");
    sub->add_option("--k", cfg.k, "Clusters per set")->capture_default_str();
    sub->add_option("--k-target", k_target, "Clusters for the target set (default --k)");
    sub->add_option("--k-candidates", k_candidates, "Clusters for the candidate pool (default --k)");
    sub->add_option("--kmeans-max-iters", cfg.kmeans_max_iters)->capture_default_str();
    sub->add_option("--kmeans-tol", cfg.kmeans_tol)->capture_default_str();
    sub->add_option("--l", cfg.l, "Neighbour order of the estimator")->capture_default_str();
    sub->add_option("--init", init, "none | uniform | subset=F | file=PATH")->capture_default_str();
    sub->add_option("--uniform-size", cfg.uniform.size)->capture_default_str();
    sub->add_option("--uniform-low", cfg.uniform.low)->capture_default_str();
    sub->add_option("--uniform-high", cfg.uniform.high)->capture_default_str();
    sub->add_option("--uniform-normalize", cfg.uniform.normalize, "true | false")->capture_default_str();
    sub->add_option("--seed", cfg.seed)->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all)")->capture_default_str();
  }

  void bind_select(CLI::App* sub) {
    sub->add_option("--max-iter", cfg.max_iter)->capture_default_str();
    sub->add_flag("--discard-nearest", cfg.discard_nearest, "Leave each point's nearest reference out");
    sub->add_option("--stop", stop, "increase | min_difference | min_kl | data_size | seq_increase | max_resets")
        ->capture_default_str();
    sub->add_option("--min-difference", cfg.stop.min_difference)->capture_default_str();
    sub->add_option("--min-kl", min_kl);
    sub->add_option("--max-data-fraction", cfg.stop.max_data_fraction)->capture_default_str();
    sub->add_option("--max-seq-increases", cfg.stop.max_sequential_increases)->capture_default_str();
    sub->add_flag("--resets-allowed", cfg.stop.resets_allowed);
    sub->add_option("--max-resets", cfg.stop.max_resets)->capture_default_str();
    sub->add_option("--v-init", v_init, "mean | prev_opt | jump")->capture_default_str();
    sub->add_option("--lr", cfg.descent.lr)->capture_default_str();
    sub->add_option("--grad-desc-iter", cfg.descent.iters)->capture_default_str();
    sub->add_option("--scale", scale, "auto | none")->capture_default_str();
    sub->add_option("--restart-prob", cfg.descent.restart_prob)->capture_default_str();
  }

  void finish(CLI::App& sub) {
    if (!config.empty()) apply_config_file(sub, config);
    cfg.k_target = k_target;
    cfg.k_candidates = k_candidates;
    cfg.stop.kind = parse_stop_kind(stop);
    cfg.stop.min_kl = min_kl;
    cfg.init = InitSpec::parse(init);
    cfg.descent.v_init = parse_v_init(v_init);
    cfg.descent.scale = parse_scale_mode(scale);
    cfg.validate();
    set_thread_count(cfg.threads);
  }
};

struct Inputs {
  VectorDataset target;
  VectorDataset candidates;
  ClusterModel target_model;
  ClusterModel candidate_model;
  DataFormat format;
};

Inputs load_and_quantize(const RunArgs& a, std::map<std::string, double>& timings, std::ostream& log) {
  Inputs in;
  in.format = parse_data_format(a.format);
  auto start = Clock::now();
  in.target = load_dataset(a.target, in.format);
  in.candidates = load_dataset(a.candidates, in.format);
  timings["load"] = elapsed(start);
  if (in.target.empty()) throw DataError(a.target + ": no rows");
  if (in.candidates.empty()) throw DataError(a.candidates + ": no rows");
  if (in.target.dim() != in.candidates.dim()) {
    throw DataError("target dimension " + std::to_string(in.target.dim()) + " differs from candidate dimension " +
                    std::to_string(in.candidates.dim()));
  }
  log << "loaded " << in.target.size() << " target and " << in.candidates.size() << " candidate rows\n";

  start = Clock::now();
  const SeededRng kmeans_root = SeededRng(a.cfg.seed).child("kmeans");
  SeededRng target_rng = kmeans_root.child("target");
  SeededRng candidate_rng = kmeans_root.child("candidates");
  in.target_model = quantize(in.target, a.cfg.target_k(), target_rng, a.cfg.kmeans_max_iters, a.cfg.kmeans_tol);
  in.candidate_model =
      quantize(in.candidates, a.cfg.candidate_k(), candidate_rng, a.cfg.kmeans_max_iters, a.cfg.kmeans_tol);
  timings["quantize"] = elapsed(start);
  log << "quantized to " << in.target_model.k() << " target and " << in.candidate_model.k() << " candidate centroids\n";
  return in;
}

InitStrategy make_init(const GioConfig& cfg, DataFormat format) {
  switch (cfg.init.mode) {
    case InitMode::None: return NoInit{};
    case InitMode::Uniform: return UniformInit{cfg.uniform};
    case InitMode::Subset: return SubsetInit{cfg.init.fraction};
    case InitMode::File: {
      auto points = load_dataset(cfg.init.path, format);
      if (points.size() > cfg.candidate_k()) {
        SeededRng rng = SeededRng(cfg.seed).child("kmeans").child("init");
        points = quantize(points, cfg.candidate_k(), rng, cfg.kmeans_max_iters, cfg.kmeans_tol).centroids;
      }
      return ExplicitInit{std::move(points)};
    }
  }
  return NoInit{};
}

std::string extension(DataFormat format) { return format == DataFormat::TabularTsv ? ".tsv" : ".csv"; }

// Selected rows, selected centroid indices, KL curve and report.json.
void write_outputs(const fs::path& dir, const Inputs& in, const SelectionReport& report, json config_echo,
                   std::ostream& log) {
  fs::create_directories(dir);
  const auto chosen = report.selected();
  const auto rows = explode_indices(chosen, in.candidate_model);
  const auto selected_rows = in.candidates.subset(rows);
  save_dataset(dir / ("selected" + extension(in.format)), selected_rows, in.format);

  {
    std::ofstream out(dir / "selected_centroids.txt");
    for (const auto c : chosen) out << c << '\n';
  }
  {
    std::ofstream out(dir / "kl_curve.csv");
    out << "iteration,kl\n";
    for (std::size_t i = 0; i < report.kl_history.size(); ++i) {
      out << i + 1 << ',' << format_double(report.kl_history[i]) << '\n';
    }
  }

  json j = report;
  j["tool"] = "gio";
  j["version"] = GIO_VERSION;
  j["counts"] = {{"target_rows", in.target.size()},
                 {"candidate_rows", in.candidates.size()},
                 {"target_centroids", in.target_model.k()},
                 {"candidate_centroids", in.candidate_model.k()},
                 {"selected_centroids", chosen.size()},
                 {"selected_rows", rows.size()}};
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (const auto r : rows) ids.push_back(in.candidates.id(r));
  j["selected_ids"] = ids;
  j["config"] = std::move(config_echo);
  std::ofstream(dir / "report.json") << j.dump(2) << '\n';
  log << "selected " << chosen.size() << " centroids (" << rows.size() << " rows), stopped on "
      << to_string(report.reason) << "; outputs in " << dir.string() << '\n';
}

std::vector<std::size_t> read_indices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  std::vector<std::size_t> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected a non-negative integer, got '" + token + "'");
    }
    out.push_back(value);
  }
  return out;
}

int run_select(CLI::App& sub, RunArgs& a, std::ostream& log) {
  a.finish(sub);
  SelectionReport report;
  std::map<std::string, double> timings;
  const auto in = load_and_quantize(a, timings, log);
  report = run_gio(in.target_model.centroids, in.candidate_model.centroids, make_init(a.cfg, in.format), a.cfg);
  report.timings.insert(timings.begin(), timings.end());
  fs::create_directories(a.out);
  std::ofstream(fs::path(a.out) / "config.toml") << config_file_text(a.cfg);
  write_outputs(a.out, in, report, json(a.cfg), log);
  return kOk;
}

struct BaselineArgs {
  std::string method = "naive";
  std::size_t iters = 100;
  std::optional<std::size_t> size;
};

int run_baseline(CLI::App& sub, RunArgs& a, const BaselineArgs& b, std::ostream& log) {
  a.finish(sub);
  if (a.cfg.init.mode != InitMode::None && a.cfg.init.mode != InitMode::Uniform) {
    throw ConfigError("baseline supports --init none or uniform");
  }
  if (b.method != "naive" && !b.size) throw ConfigError("--size is required for --method " + b.method);

  std::map<std::string, double> timings;
  const auto in = load_and_quantize(a, timings, log);
  const auto& x = in.target_model.centroids;
  const auto& g = in.candidate_model.centroids;
  const auto start = Clock::now();
  SelectionReport report;
  if (b.method == "naive") {
    VectorDataset d0;
    if (a.cfg.init.mode == InitMode::Uniform) {
      SeededRng rng = SeededRng(a.cfg.seed).child("uniform");
      d0 = make_uniform_start(a.cfg.uniform, x.dim(), rng);
    }
    report = naive_hill_climb(x, g, d0, b.iters, a.cfg.l);
  } else {
    report.method = b.method;
    if (b.method == "similarity") {
      report.acquired = similarity_search_select(x, g, *b.size);
    } else {
      SeededRng rng = SeededRng(a.cfg.seed).child("random");
      report.acquired = random_select(g, *b.size, rng);
    }
    report.reason = StopReason::DataSize;
    report.iterations = report.acquired.size();
  }
  report.timings["select"] = elapsed(start);
  report.timings.insert(timings.begin(), timings.end());

  json echo = a.cfg;
  echo["method"] = b.method;
  echo["iters"] = b.iters;
  if (b.size) echo["size"] = *b.size;
  write_outputs(a.out, in, report, std::move(echo), log);
  return kOk;
}

struct QuantizeArgs {
  std::string input;
  std::string format = "vectors-csv";
  std::string out = "quantize_out";
  std::size_t k = 1500;
  std::size_t max_iters = kDefaultKMeansIters;
  double tol = kDefaultKMeansTol;
  std::uint64_t seed = 0;
  int threads = 0;
};

int run_quantize(const QuantizeArgs& a, std::ostream& log) {
  set_thread_count(a.threads);
  const auto ds = load_dataset(a.input, parse_data_format(a.format));
  if (ds.empty()) throw DataError(a.input + ": no rows");
  SeededRng rng = SeededRng(a.seed).child("kmeans");
  const auto model = quantize(ds, a.k, rng, a.max_iters, a.tol);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  save_dataset(dir / "centroids.csv", model.centroids, DataFormat::VectorsCsv);
  {
    std::ofstream out(dir / "assignment.txt");
    for (const auto c : model.assignment) out << c << '\n';
  }
  const json sidecar = {{"k", model.k()}, {"inertia", model.inertia}, {"iterations", model.iterations}, {"seed", a.seed}};
  std::ofstream(dir / "quantize.json") << sidecar.dump(2) << '\n';
  log << "quantized " << ds.size() << " rows into " << model.k() << " clusters (inertia "
      << format_double(model.inertia) << ")\n";
  return kOk;
}

struct ExplodeArgs {
  std::string input;
  std::string format = "vectors-csv";
  std::string assignment;
  std::string selected;
  std::optional<std::size_t> k;
  std::string out;
};

int run_explode(const ExplodeArgs& a, std::ostream& out) {
  const auto format = parse_data_format(a.format);
  const auto source = load_dataset(a.input, format);
  const auto assignment = read_indices(a.assignment);
  const auto selected = read_indices(a.selected);
  if (assignment.size() != source.size()) {
    throw DataError(a.assignment + ": " + std::to_string(assignment.size()) + " assignments for " +
                    std::to_string(source.size()) + " source rows");
  }
  std::size_t k = 0;
  if (a.k) {
    k = *a.k;
  } else if (!assignment.empty()) {
    k = *std::max_element(assignment.begin(), assignment.end()) + 1;
  }
  const auto rows = source.subset(explode_indices(selected, assignment, k));
  if (a.out.empty()) {
    write_dataset(out, rows, format);
  } else {
    save_dataset(a.out, rows, format);
  }
  return kOk;
}

struct KlArgs {
  std::string target;
  std::string reference;
  std::string format = "vectors-csv";
  std::size_t l = 5;
  std::optional<std::size_t> single_k;
  bool discard_nearest = false;
};

int run_kl(const KlArgs& a, std::ostream& out) {
  const auto format = parse_data_format(a.format);
  const auto x = load_dataset(a.target, format);
  const auto ref = load_dataset(a.reference, format);
  const double value = a.single_k ? kl_single_k(x, ref, *a.single_k, a.discard_nearest)
                                  : kl_averaged(x, ref, a.l, a.discard_nearest);
  out << format_double(value) << '\n';
  return kOk;
}

struct CheckArgs {
  std::string name;
  std::uint64_t seed = 0;
  bool fast = false;
  std::string out_dir = "check_out";
};

int run_checks(const CheckArgs& a, std::ostream& out) {
  std::vector<CheckName> names;
  if (a.name == "all") {
    names = all_checks();
  } else {
    names.push_back(parse_check_name(a.name));
  }
  bool all_pass = true;
  for (const auto name : names) {
    const auto result = run_check(name, a.seed, CheckOptions{a.fast, fs::path(a.out_dir)});
    const fs::path dir = fs::path(a.out_dir) / result.name;
    fs::create_directories(dir);
    const json j = {{"name", result.name}, {"pass", result.pass}, {"seed", a.seed},
                    {"metrics", result.metrics}, {"summary", result.summary}};
    std::ofstream(dir / "result.json") << j.dump(2) << '\n';
    out << result.name << ": " << (result.pass ? "PASS" : "FAIL") << " - " << result.summary << '\n';
    all_pass = all_pass && result.pass;
  }
  return all_pass ? kOk : kCheckFailed;
}

struct BenchArgs {
  std::vector<std::size_t> sizes{2000, 8000};
  std::vector<std::string> methods{"gio", "naive"};
  std::size_t iters = 20;
  int repeats = 1;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "bench.csv";
};

int run_bench(const BenchArgs& a, std::ostream& log) {
  set_thread_count(a.threads);
  std::ofstream csv(a.out);
  if (!csv) throw DataError(a.out + ": cannot open for writing");
  csv << kBenchHeader << '\n';
  for (const auto size : a.sizes) {
    for (const auto& method : a.methods) {
      const auto row = bench_selection(method, size, a.iters, a.seed, a.repeats);
      csv << to_csv(row) << '\n';
      log << method << " |G|=" << size << ": " << row.iterations << " iterations in " << format_double(row.seconds)
          << " s\n";
    }
  }
  return kOk;
}

class NullBuffer : public std::streambuf {
 protected:
  int overflow(int c) override { return c; }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Greedy selection of training data by kNN KL divergence", "gio"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GIO_VERSION);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Progress messages on stderr");

  QuantizeArgs q;
  auto* quantize_cmd = app.add_subcommand("quantize", "k-means a dataset into centroids and an assignment");
  quantize_cmd->add_option("--input", q.input)->required();
  quantize_cmd->add_option("--format", q.format)->capture_default_str();
  quantize_cmd->add_option("--out", q.out, "Output directory")->capture_default_str();
  quantize_cmd->add_option("--k", q.k)->capture_default_str();
  quantize_cmd->add_option("--kmeans-max-iters", q.max_iters)->capture_default_str();
  quantize_cmd->add_option("--kmeans-tol", q.tol)->capture_default_str();
  quantize_cmd->add_option("--seed", q.seed)->capture_default_str();
  quantize_cmd->add_option("--threads", q.threads)->capture_default_str();

  RunArgs sel;
  auto* select_cmd = app.add_subcommand("select", "Select candidates that bring G closest to X");
  sel.bind_common(select_cmd);
  sel.bind_select(select_cmd);

  ExplodeArgs ex;
  auto* explode_cmd = app.add_subcommand("explode", "Expand selected centroids back to source rows");
  explode_cmd->add_option("--input", ex.input, "Source rows that were quantized")->required();
  explode_cmd->add_option("--format", ex.format)->capture_default_str();
  explode_cmd->add_option("--assignment", ex.assignment, "assignment.txt from quantize")->required();
  explode_cmd->add_option("--selected", ex.selected, "One centroid index per line")->required();
  explode_cmd->add_option("--k", ex.k, "Number of clusters (default: largest assignment + 1)");
  explode_cmd->add_option("--out", ex.out, "Output file (default stdout)");

  KlArgs kl;
  auto* kl_cmd = app.add_subcommand("kl", "kNN estimate of KL(target || reference)");
  kl_cmd->add_option("--target", kl.target)->required();
  kl_cmd->add_option("--reference", kl.reference)->required();
  kl_cmd->add_option("--format", kl.format)->capture_default_str();
  kl_cmd->add_option("--l", kl.l)->capture_default_str();
  kl_cmd->add_option("--single-k", kl.single_k, "Use the single-k estimator with this k");
  kl_cmd->add_flag("--discard-nearest", kl.discard_nearest);

  RunArgs base;
  BaselineArgs b;
  auto* baseline_cmd = app.add_subcommand("baseline", "Naive greedy, similarity search or random selection");
  base.bind_common(baseline_cmd);
  baseline_cmd->add_option("--method", b.method)
      ->check(CLI::IsMember({"naive", "similarity", "random"}))
      ->capture_default_str();
  baseline_cmd->add_option("--iters", b.iters, "Hill-climb steps (naive)")->capture_default_str();
  baseline_cmd->add_option("--size", b.size, "Number of centroids to pick (similarity, random)");

  CheckArgs ck;
  auto* check_cmd = app.add_subcommand("check", "Run a synthetic consistency check");
  std::vector<std::string> check_names{"all"};
  for (const auto c : all_checks()) check_names.emplace_back(to_string(c));
  check_cmd->add_option("--name", ck.name)->required()->check(CLI::IsMember(check_names));
  check_cmd->add_option("--seed", ck.seed)->capture_default_str();
  check_cmd->add_flag("--fast", ck.fast, "Shorter timing runs");
  check_cmd->add_option("--out-dir", ck.out_dir)->capture_default_str();

  BenchArgs bn;
  auto* bench_cmd = app.add_subcommand("bench", "Time GIO against the naive greedy baseline");
  bench_cmd->add_option("--sizes", bn.sizes)->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--methods", bn.methods)->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--iters", bn.iters)->capture_default_str();
  bench_cmd->add_option("--repeats", bn.repeats)->capture_default_str();
  bench_cmd->add_option("--seed", bn.seed)->capture_default_str();
  bench_cmd->add_option("--threads", bn.threads)->capture_default_str();
  bench_cmd->add_option("--out", bn.out)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  }

  NullBuffer null_buffer;
  std::ostream quiet(&null_buffer);
  std::ostream& log = verbose ? err : quiet;

  try {
    if (quantize_cmd->parsed()) return run_quantize(q, log);
    if (select_cmd->parsed()) return run_select(*select_cmd, sel, log);
    if (explode_cmd->parsed()) return run_explode(ex, out);
    if (kl_cmd->parsed()) return run_kl(kl, out);
    if (baseline_cmd->parsed()) return run_baseline(*baseline_cmd, base, b, log);
    if (check_cmd->parsed()) return run_checks(ck, out);
    if (bench_cmd->parsed()) return run_bench(bn, log);
  } catch (const ConfigError& e) {
    err << "gio: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "gio: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "gio: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gio::cli
