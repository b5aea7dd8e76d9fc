#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace wsd {

/// Portable random source used for every stochastic step (subsampling,
/// fold assignment, half splits).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded draws and shuffles are implemented here rather than with
/// std::uniform_int_distribution / std::shuffle, whose algorithms are
/// implementation-defined, so a given seed yields the same results with any
/// conforming standard library.
///
/// Independent streams for different purposes are derived from one user seed
/// with derive_seed(), a SplitMix64 finalizer over (seed, stream tag).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Fisher-Yates, walking from the back.
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

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Stream tags.
inline constexpr std::uint64_t kSubsampleStream = 1;
inline constexpr std::uint64_t kFoldStream = 2;
inline constexpr std::uint64_t kHalfSplitStream = 3;

}  // namespace wsd
