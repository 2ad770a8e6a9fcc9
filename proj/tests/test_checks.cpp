#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gio/checks.hpp"
#include "gio/error.hpp"

using namespace gio;
namespace fs = std::filesystem;

TEST_CASE("check names round trip") {
  for (const auto c : all_checks()) CHECK(parse_check_name(to_string(c)) == c);
  CHECK(all_checks().size() == 6);
  CHECK_THROWS_AS(parse_check_name("nonsense"), ConfigError);
}

TEST_CASE("checks write their artifacts") {
  const fs::path dir = fs::temp_directory_path() / "gio_test_checks";
  fs::remove_all(dir);
  const auto result = run_check(CheckName::NegativeConsistency, 3, CheckOptions{false, dir});
  CHECK(result.name == "negative_consistency");
  CHECK(result.pass);
  REQUIRE(result.artifacts.size() == 2);
  for (const auto& p : result.artifacts) {
    CHECK(fs::exists(p));
    CHECK(p.parent_path() == dir / "negative_consistency");
  }
  std::ifstream scatter(dir / "negative_consistency" / "scatter.csv");
  std::string header;
  std::getline(scatter, header);
  CHECK(header == "role,x,y");
  fs::remove_all(dir);
}

TEST_CASE("nothing is written without an output directory") {
  const auto result = run_check(CheckName::QuantizationConsistency, 0);
  CHECK(result.artifacts.empty());
  CHECK(result.metrics.at("ratio") == doctest::Approx(result.metrics.at("kl_quantized") / result.metrics.at("kl_far")));
}

TEST_CASE("checks are reproducible") {
  const auto a = run_check(CheckName::SelfConsistency, 5);
  const auto b = run_check(CheckName::SelfConsistency, 5);
  CHECK(a.metrics.at("selected_fraction") == b.metrics.at("selected_fraction"));
  CHECK(a.pass == b.pass);
}

TEST_CASE("bench rows") {
  const auto gio_row = bench_selection("gio", 300, 5, 0);
  CHECK(gio_row.iterations == 5);
  CHECK(gio_row.seconds > 0.0);
  const auto naive_row = bench_selection("naive", 300, 2, 0);
  CHECK(naive_row.iterations == 2);
  CHECK(to_csv(naive_row).starts_with("naive,300,2,"));
  CHECK_THROWS_AS(bench_selection("magic", 300, 2, 0), ConfigError);
}
