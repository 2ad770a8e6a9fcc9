#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace gio {

// xoshiro256** seeded through splitmix64. Every draw is built from integer
// arithmetic so sequences match across compilers and standard libraries
// (std:: distributions are implementation-defined and are not used).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double low, double high);
  // Uniform integer on [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  // Standard normal (Box-Muller, second variate cached).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Independent stream derived from this stream's seed and a name. The
  // result does not depend on how many draws this stream has made.
  SeededRng child(std::string_view name) const;
  SeededRng child(std::uint64_t index) const;

  // First `count` entries of a uniformly random permutation of [0, n).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gio
