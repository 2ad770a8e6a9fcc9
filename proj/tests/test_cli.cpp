#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gio/cli.hpp"
#include "gio/dataset.hpp"
#include "gio/kl.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace gio;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run gio_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path workdir(const std::string& name) {
  const fs::path p = fs::path(GIO_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

void write_csv(const fs::path& p, const VectorDataset& ds) { save_dataset(p, ds, DataFormat::VectorsCsv); }

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

// Target cloud plus a pool that is half near it and half far away.
void write_blobs(const fs::path& dir, std::uint64_t seed) {
  SeededRng rng(seed);
  write_csv(dir / "x.csv", oracle::gaussian(rng, 60, 2, 3.0, 0.7));
  const auto near = oracle::gaussian(rng, 40, 2, 3.0, 0.7);
  const auto far = oracle::gaussian(rng, 40, 2, -30.0, 0.7);
  write_csv(dir / "g.csv", VectorDataset::concat(near, far));
}

std::vector<std::string> select_args(const fs::path& dir, const fs::path& out) {
  return {"select",         "--target",      (dir / "x.csv").string(), "--candidates", (dir / "g.csv").string(),
          "--out",          out.string(),    "--uniform-size",         "30",           "--uniform-low",
          "-5",             "--uniform-high", "10",                    "--uniform-normalize", "false"};
}

json without_timings(json j) {
  j.erase("timings");
  return j;
}

}  // namespace

TEST_CASE("help and usage errors") {
  const auto help = gio_cli({"select", "--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("--grad-desc-iter") != std::string::npos);
  CHECK(gio_cli({}).code == cli::kUsageError);
  CHECK(gio_cli({"select", "--bogus"}).code == cli::kUsageError);
  CHECK(gio_cli({"frobnicate"}).code == cli::kUsageError);
  CHECK(gio_cli({"check", "--name", "nope"}).code == cli::kUsageError);
}

TEST_CASE("data errors carry file and line") {
  const auto dir = workdir("data_errors");
  write_text(dir / "bad.csv", "1,2\n3,4\n5\n");
  write_text(dir / "ok.csv", "1,2\n3,4\n");
  const auto r = gio_cli({"kl", "--target", (dir / "bad.csv").string(), "--reference", (dir / "ok.csv").string()});
  CHECK(r.code == cli::kDataError);
  CHECK(r.err.find("bad.csv:3") != std::string::npos);
  const auto missing = gio_cli({"kl", "--target", (dir / "none.csv").string(), "--reference", "x"});
  CHECK(missing.code == cli::kDataError);
}

TEST_CASE("invalid configuration is a usage error") {
  const auto dir = workdir("bad_config");
  write_blobs(dir, 1);
  auto args = select_args(dir, dir / "out");
  args.insert(args.end(), {"--stop", "min_kl"});
  const auto r = gio_cli(args);
  CHECK(r.code == cli::kUsageError);
  CHECK(r.err.find("min-kl") != std::string::npos);
}

TEST_CASE("kl prints the library value") {
  const auto dir = workdir("kl");
  SeededRng rng(2);
  const auto x = oracle::gaussian(rng, 30, 3);
  const auto ref = oracle::gaussian(rng, 20, 3, 1.0);
  write_csv(dir / "x.csv", x);
  write_csv(dir / "d.csv", ref);
  const auto avg = gio_cli({"kl", "--target", (dir / "x.csv").string(), "--reference", (dir / "d.csv").string()});
  REQUIRE(avg.code == 0);
  CHECK(std::stod(avg.out) == kl_averaged(x, ref, 5));
  const auto single = gio_cli({"kl", "--target", (dir / "x.csv").string(), "--reference", (dir / "d.csv").string(),
                               "--single-k", "2", "--discard-nearest"});
  REQUIRE(single.code == 0);
  CHECK(std::stod(single.out) == kl_single_k(x, ref, 2, true));
}

TEST_CASE("select writes the full set of outputs") {
  const auto dir = workdir("select");
  write_blobs(dir, 3);
  const auto out = dir / "out";
  const auto r = gio_cli(select_args(dir, out));
  REQUIRE(r.code == 0);
  const auto report = load_json(out / "report.json");
  CHECK(report["tool"] == "gio");
  CHECK(report["method"] == "gio");
  CHECK(report["termination_reason"] == "increase");
  CHECK(report["counts"]["candidate_rows"] == 80);
  const auto acquired = report["acquired_centroids"].get<std::vector<std::size_t>>();
  CHECK_FALSE(acquired.empty());
  CHECK(report["selected_ids"].size() == acquired.size());
  CHECK(report["config"]["uniform_size"] == 30);
  CHECK(report.contains("timings"));

  std::ifstream curve(out / "kl_curve.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(curve, line)) ++lines;
  CHECK(lines == acquired.size() + 1);

  // Selected rows are the chosen source rows, verbatim.
  std::istringstream g_text(slurp(dir / "g.csv"));
  std::vector<std::string> g_rows;
  while (std::getline(g_text, line)) g_rows.push_back(line);
  std::istringstream sel_text(slurp(out / "selected.csv"));
  std::vector<std::string> sel_rows;
  while (std::getline(sel_text, line)) sel_rows.push_back(line);
  REQUIRE(sel_rows.size() == acquired.size());
  std::vector<std::size_t> sorted = acquired;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sel_rows[i] == g_rows[sorted[i]]);
}

TEST_CASE("config file values apply and flags win") {
  const auto dir = workdir("config_file");
  write_blobs(dir, 4);
  write_text(dir / "run.toml", "l = 3\nmax_iter = 2\nv-init = \"mean\"\nstop = \"min_difference\"\n");
  auto args = select_args(dir, dir / "out");
  args.insert(args.end(), {"--config", (dir / "run.toml").string(), "--max-iter", "4"});
  REQUIRE(gio_cli(args).code == 0);
  const auto cfg = load_json(dir / "out" / "report.json")["config"];
  CHECK(cfg["l"] == 3);
  CHECK(cfg["max_iter"] == 4);
  CHECK(cfg["v_init"] == "mean");
  CHECK(cfg["stop"] == "min_difference");

  write_text(dir / "typo.toml", "learning_rate = 0.1\n");
  auto bad = select_args(dir, dir / "out2");
  bad.insert(bad.end(), {"--config", (dir / "typo.toml").string()});
  const auto r = gio_cli(bad);
  CHECK(r.code == cli::kUsageError);
  CHECK(r.err.find("learning_rate") != std::string::npos);
}

TEST_CASE("the written config reproduces the run") {
  const auto dir = workdir("rerun");
  write_blobs(dir, 5);
  auto args = select_args(dir, dir / "first");
  args.insert(args.end(), {"--v-init", "jump", "--restart-prob", "0.5", "--seed", "99", "--l", "4"});
  REQUIRE(gio_cli(args).code == 0);
  REQUIRE(gio_cli({"select", "--target", (dir / "x.csv").string(), "--candidates", (dir / "g.csv").string(), "--out",
                   (dir / "second").string(), "--config", (dir / "first" / "config.toml").string()})
              .code == 0);
  CHECK(without_timings(load_json(dir / "first" / "report.json")) ==
        without_timings(load_json(dir / "second" / "report.json")));
  CHECK(slurp(dir / "first" / "selected.csv") == slurp(dir / "second" / "selected.csv"));
}

TEST_CASE("tabular input keeps payload columns") {
  const auto dir = workdir("tsv");
  SeededRng rng(6);
  std::ostringstream x, g;
  for (int i = 0; i < 30; ++i) x << "x" << i << "\tq" << i << '\t' << rng.normal(0, 1) << ' ' << rng.normal(0, 1) << '\n';
  for (int i = 0; i < 30; ++i) {
    g << "g" << i << "\tsentence " << i << "\textra\t" << rng.normal(0, 1) << ' ' << rng.normal(0, 1) << '\n';
  }
  write_text(dir / "x.tsv", x.str());
  write_text(dir / "g.tsv", g.str());
  REQUIRE(gio_cli({"select", "--format", "tabular-tsv", "--target", (dir / "x.tsv").string(), "--candidates",
                   (dir / "g.tsv").string(), "--out", (dir / "out").string(), "--stop", "data_size",
                   "--max-data-fraction", "0.2"})
              .code == 0);
  const auto text = slurp(dir / "out" / "selected.tsv");
  CHECK(text.find("\textra\t") != std::string::npos);
  const auto report = load_json(dir / "out" / "report.json");
  CHECK(report["selected_ids"].size() == 6);
  CHECK(report["selected_ids"][0].get<std::string>().starts_with("g"));
}

TEST_CASE("baselines share the select output format") {
  const auto dir = workdir("baseline");
  write_blobs(dir, 7);
  for (const std::string method : {"naive", "similarity", "random"}) {
    const auto out = dir / method;
    std::vector<std::string> args{"baseline", "--method", method,  "--target", (dir / "x.csv").string(),
                                  "--candidates", (dir / "g.csv").string(), "--out", out.string(),
                                  "--iters", "5", "--size", "10"};
    REQUIRE(gio_cli(args).code == 0);
    const auto report = load_json(out / "report.json");
    CHECK(report["method"] == method);
    CHECK(fs::exists(out / "selected.csv"));
    CHECK(fs::exists(out / "kl_curve.csv"));
    const std::size_t expected = method == "naive" ? 5 : 10;
    CHECK(report["acquired_centroids"].size() == expected);
  }
  CHECK(gio_cli({"baseline", "--method", "random", "--target", (dir / "x.csv").string(), "--candidates",
                 (dir / "g.csv").string(), "--out", (dir / "r").string()})
            .code == cli::kUsageError);
}

TEST_CASE("quantize then explode recovers the member rows") {
  const auto dir = workdir("explode");
  SeededRng rng(8);
  write_csv(dir / "g.csv", oracle::gaussian(rng, 200, 3));
  REQUIRE(gio_cli({"quantize", "--input", (dir / "g.csv").string(), "--k", "10", "--out", (dir / "q").string()})
              .code == 0);
  const auto sidecar = load_json(dir / "q" / "quantize.json");
  CHECK(sidecar["k"] == 10);
  CHECK(sidecar.contains("inertia"));
  CHECK(sidecar.contains("iterations"));
  CHECK(sidecar["seed"] == 0);

  std::vector<std::size_t> assignment;
  {
    std::ifstream in(dir / "q" / "assignment.txt");
    std::size_t a;
    while (in >> a) assignment.push_back(a);
  }
  REQUIRE(assignment.size() == 200);
  write_text(dir / "sel.txt", "3\n7\n");
  const auto r = gio_cli({"explode", "--input", (dir / "g.csv").string(), "--assignment",
                          (dir / "q" / "assignment.txt").string(), "--selected", (dir / "sel.txt").string()});
  REQUIRE(r.code == 0);
  std::istringstream g_text(slurp(dir / "g.csv"));
  std::string line, expected;
  for (std::size_t i = 0; std::getline(g_text, line); ++i) {
    if (assignment[i] == 3 || assignment[i] == 7) expected += line + "\n";
  }
  CHECK(r.out == expected);

  write_text(dir / "bad.txt", "3\nseven\n");
  const auto bad = gio_cli({"explode", "--input", (dir / "g.csv").string(), "--assignment",
                            (dir / "q" / "assignment.txt").string(), "--selected", (dir / "bad.txt").string()});
  CHECK(bad.code == cli::kDataError);
  CHECK(bad.err.find("bad.txt:2") != std::string::npos);
}

TEST_CASE("check subcommand reports pass and writes artifacts") {
  const auto dir = workdir("check");
  const auto r = gio_cli({"check", "--name", "negative_consistency", "--seed", "1", "--out-dir", dir.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(fs::exists(dir / "negative_consistency" / "result.json"));
}

TEST_CASE("bench writes a csv") {
  const auto dir = workdir("bench");
  REQUIRE(gio_cli({"bench", "--sizes", "200,400", "--iters", "2", "--out", (dir / "bench.csv").string()}).code == 0);
  const auto text = slurp(dir / "bench.csv");
  CHECK(text.starts_with("method,G,iterations,seconds\n"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

// Quantize both sets to 1500 centroids, select on the centroids, explode the
// selection back to candidate rows.
TEST_CASE("pipeline smoke test on 10k rows") {
  const auto dir = workdir("pipeline");
  SeededRng rng(9);
  // Candidates: a mixture of the target distribution and an unrelated one.
  const auto g_near = oracle::gaussian(rng, 5000, 4, 0.0, 1.0);
  const auto g_far = oracle::gaussian(rng, 5000, 4, 6.0, 1.0);
  write_csv(dir / "g.csv", VectorDataset::concat(g_near, g_far));
  write_csv(dir / "x.csv", oracle::gaussian(rng, 2000, 4, 0.0, 1.0));

  for (const std::string set : {"g", "x"}) {
    REQUIRE(gio_cli({"quantize", "--input", (dir / (set + ".csv")).string(), "--k", "1500", "--kmeans-max-iters", "10",
                     "--out", (dir / ("q" + set)).string()})
                .code == 0);
  }
  REQUIRE(gio_cli({"select", "--target", (dir / "qx" / "centroids.csv").string(), "--candidates",
                   (dir / "qg" / "centroids.csv").string(), "--out", (dir / "sel").string(), "--uniform-low", "-4",
                   "--uniform-high", "10", "--uniform-normalize", "false"})
              .code == 0);
  const auto report = load_json(dir / "sel" / "report.json");
  CHECK(report["counts"]["target_centroids"] == 1500);
  CHECK(report["counts"]["candidate_centroids"] == 1500);
  const auto chosen = report["acquired_centroids"].get<std::vector<std::size_t>>();
  REQUIRE_FALSE(chosen.empty());
  {
    std::ofstream sel(dir / "chosen.txt");
    for (const auto c : chosen) sel << c << '\n';
  }
  REQUIRE(gio_cli({"explode", "--input", (dir / "g.csv").string(), "--assignment",
                   (dir / "qg" / "assignment.txt").string(), "--selected", (dir / "chosen.txt").string(), "--out",
                   (dir / "rows.csv").string()})
              .code == 0);
  const auto rows = load_dataset(dir / "rows.csv", DataFormat::VectorsCsv);
  CHECK(rows.size() >= chosen.size());
  // The exploded rows should mostly come from the matching half of the pool.
  std::size_t near = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double s = 0.0;
    for (const double v : rows.point(i)) s += v;
    if (s < 12.0) ++near;
  }
  CHECK(static_cast<double>(near) / static_cast<double>(rows.size()) > 0.9);
}
