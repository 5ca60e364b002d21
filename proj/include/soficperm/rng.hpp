#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "soficperm/perm.hpp"

namespace soficperm {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream key from a master seed and a path of
/// indices, e.g. derive_seed(master, {d, sample}). Pure function of its
/// inputs, so work units can be scheduled in any order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Counter-based generator: the k-th output is mix64(key + k * golden).
/// Two generators with different keys never share state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform in [0, bound) by multiply-high; no rejection loop.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Fisher-Yates shuffle of the identity.
Permutation random_permutation(std::size_t degree, CounterRng& rng);
void random_permutation_into(std::vector<std::uint32_t>& image, CounterRng& rng);

}  // namespace soficperm
