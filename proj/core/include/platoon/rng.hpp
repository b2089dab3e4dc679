#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace platoon {

// Seeded generator with platform-independent derived distributions.
// std::mt19937_64's output sequence is fixed by the standard, but the
// standard distributions are not, so uniform draws are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for a named purpose.
  static Rng substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01();

  // Uniform integer on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Uniform integer on [lo, hi).
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace platoon
