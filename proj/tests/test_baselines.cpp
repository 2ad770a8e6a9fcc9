#include <algorithm>
#include <set>

#include "doctest.h"
#include "gio/baselines.hpp"
#include "oracles.hpp"

using namespace gio;

TEST_CASE("best single addition equals the brute-force argmin") {
  SeededRng rng(70);
  for (int trial = 0; trial < 8; ++trial) {
    const auto x = oracle::gaussian(rng, 25, 2);
    const auto ref = oracle::gaussian(rng, 6, 2, 0.5);
    const auto g = oracle::gaussian(rng, 30, 2, 0.0, 1.5);
    CandidatePool pool(g.size());
    std::vector<bool> taken(g.size(), false);
    for (std::size_t i = 0; i < g.size(); i += 4) {
      pool.remove(i);
      taken[i] = true;
    }
    const AveragedKl obj(x, 3);
    const auto best = best_single_addition(obj, ref, g, pool);
    double expected_kl = 0.0;
    const auto expected = oracle::best_addition(x, ref, g, 3, taken, &expected_kl);
    CHECK(best.index == expected);
    CHECK(best.kl == doctest::Approx(expected_kl).epsilon(1e-10));
  }
}

TEST_CASE("naive hill climb takes the exact argmin at every step") {
  SeededRng rng(71);
  const auto x = oracle::gaussian(rng, 20, 2);
  const auto g = oracle::gaussian(rng, 15, 2, 0.0, 2.0);
  const auto d0 = oracle::uniform(rng, 5, 2, -3.0, 3.0);
  const auto report = naive_hill_climb(x, g, d0, 6, 2);
  CHECK(report.method == "naive");
  CHECK(report.iterations == 6);
  CHECK(report.reason == StopReason::MaxIter);
  REQUIRE(report.baseline_kl.has_value());
  CHECK(*report.baseline_kl == doctest::Approx(oracle::kl_averaged(x, d0, 2)));

  auto ref = d0;
  std::vector<bool> taken(g.size(), false);
  for (std::size_t t = 0; t < report.acquired.size(); ++t) {
    double kl = 0.0;
    const auto expected = oracle::best_addition(x, ref, g, 2, taken, &kl);
    CHECK(report.acquired[t] == expected);
    CHECK(report.kl_history[t] == doctest::Approx(kl).epsilon(1e-10));
    taken[expected] = true;
    ref = oracle::with_point(ref, g.point(expected));
  }
}

TEST_CASE("naive hill climb stops when the pool runs out") {
  SeededRng rng(72);
  const auto x = oracle::gaussian(rng, 10, 1);
  const auto g = oracle::gaussian(rng, 4, 1);
  const auto report = naive_hill_climb(x, g, VectorDataset(), 10, 1);
  CHECK(report.acquired.size() == 4);
  CHECK(report.reason == StopReason::Exhausted);
  CHECK_FALSE(report.baseline_kl.has_value());
}

TEST_CASE("similarity search covers each target's nearest candidates first") {
  const auto x = VectorDataset::from_rows({{0.0}, {10.0}});
  const auto g = VectorDataset::from_rows({{0.1}, {0.2}, {9.7}, {9.9}, {5.0}});
  // Rank 1: 0 (for x0) and 3 (for x1); rank 2: 1 and 2.
  const auto two = similarity_search_select(x, g, 2);
  CHECK(std::set<std::size_t>(two.begin(), two.end()) == std::set<std::size_t>{0, 3});
  const auto four = similarity_search_select(x, g, 4);
  CHECK(std::set<std::size_t>(four.begin(), four.end()) == std::set<std::size_t>{0, 1, 2, 3});
  CHECK(similarity_search_select(x, g, 5).size() == 5);
  CHECK_THROWS(similarity_search_select(x, g, 6));

  const auto one = VectorDataset::from_rows({{0.0}});
  const auto three = similarity_search_select(one, g, 3);
  CHECK(std::set<std::size_t>(three.begin(), three.end()) == std::set<std::size_t>{0, 1, 4});
}

TEST_CASE("similarity search ignores target row order") {
  SeededRng rng(73);
  const auto x = oracle::gaussian(rng, 30, 3);
  const auto g = oracle::gaussian(rng, 200, 3);
  std::vector<std::size_t> perm(x.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = perm.size() - 1 - i;
  const auto a = similarity_search_select(x, g, 45);
  const auto b = similarity_search_select(x.subset(perm), g, 45);
  CHECK(a == b);
  CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 45);
}

TEST_CASE("random selection") {
  SeededRng data(74);
  const auto g = oracle::gaussian(data, 50, 2);
  SeededRng a(1), b(1);
  const auto s1 = random_select(g, 20, a);
  CHECK(s1 == random_select(g, 20, b));
  CHECK(std::set<std::size_t>(s1.begin(), s1.end()).size() == 20);
  SeededRng c(2);
  const auto all = random_select(g, 50, c);
  CHECK(std::set<std::size_t>(all.begin(), all.end()).size() == 50);
  CHECK(random_select(g, 0, c).empty());
  CHECK_THROWS(random_select(g, 51, c));
}
