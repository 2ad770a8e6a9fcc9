#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gio {

enum class CheckName {
  SelfConsistency,
  NegativeConsistency,
  QuantizationConsistency,
  DerivativeSpeedup,
  CircleVsSimilarity,
  UniformSmoothing,
};

CheckName parse_check_name(std::string_view name);
std::string_view to_string(CheckName name);
std::vector<CheckName> all_checks();

struct CheckOptions {
  // Reduced iteration counts for the timing benchmark.
  bool fast = false;
  // Where CSV artifacts go (one subdirectory per check). Nothing is written
  // when unset.
  std::optional<std::filesystem::path> out_dir;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::map<std::string, double> metrics;
  std::vector<std::filesystem::path> artifacts;
  std::string summary;
};

// Builds the check's synthetic data from `seed`, runs the relevant pipeline
// and evaluates its pass predicate. Failure is reported, never thrown.
CheckResult run_check(CheckName name, std::uint64_t seed, const CheckOptions& options = {});

// Wall time of a selection run on the timing benchmark's synthetic data
// (100 target points, `candidates` uniform candidates in 2D). method is
// "gio" or "naive"; the best of `repeats` runs is kept.
struct BenchRow {
  std::string method;
  std::size_t candidates = 0;
  std::size_t iterations = 0;
  double seconds = 0.0;

  double per_iteration() const { return seconds / static_cast<double>(iterations == 0 ? 1 : iterations); }
};

inline constexpr const char* kBenchHeader = "method,G,iterations,seconds";

BenchRow bench_selection(std::string_view method, std::size_t candidates, std::size_t iters, std::uint64_t seed,
                         int repeats = 1);
std::string to_csv(const BenchRow& row);

// Pass thresholds.
inline constexpr double kSelfConsistencyMinFraction = 0.90;
inline constexpr double kQuantizationKlLow = 0.1;
inline constexpr double kQuantizationKlHigh = 1.0;
inline constexpr double kQuantizationMaxRatio = 0.05;
inline constexpr double kMinSpeedup = 3.0;
inline constexpr double kMaxGioGrowth = 1.5;
inline constexpr double kMinNaiveGrowth = 3.0;
inline constexpr double kMinInsideMargin = 0.15;
inline constexpr double kMaxUniformShift = 0.2;

}  // namespace gio
