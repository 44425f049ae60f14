// Portable seeded sampling.
//
// std::mt19937_64 is fully specified by the standard, but the standard
// distributions are not, so bounded integers are drawn here by rejection
// sampling on the raw 64-bit output. Given the same seed, every platform
// produces the same sequence, which is what makes ablation manifests
// replayable across builds.
#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace aann {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    // Largest multiple of bound that fits; draws at or above it are rejected.
    const std::uint64_t limit = max - (max % bound + 1) % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x > limit);
    return x % bound;
  }

  // Fisher-Yates, walking from the back.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aann
