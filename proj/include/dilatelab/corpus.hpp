#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "dilatelab/dilate_vector.hpp"
#include "dilatelab/intset.hpp"

namespace dilatelab {

/// Deterministic random source for seeded corpora. mt19937_64 is pinned by
/// the standard and next_below avoids std::uniform_int_distribution, whose
/// output is implementation-defined; the same seed therefore produces the
/// same draws everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  [[nodiscard]] std::uint64_t next() { return engine_(); }

  /// Uniform value in [0, n), n > 0, by rejection.
  [[nodiscard]] std::uint64_t next_below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// A uniformly random m-element subset of [0, window).
[[nodiscard]] IntSet random_subset(Rng& rng, int m, i64 window);

/// A random coprime vector: k uniform in [k_min, k_max], entries nonzero
/// with magnitudes summing to at most max_l1. Resamples until coprime.
[[nodiscard]] DilateVector random_coprime_vector(Rng& rng, int k_min,
                                                 int k_max, i64 max_l1);

/// All subsets of [0, window) with size in [min_size, max_size], by
/// ascending bitmask. window must be at most 24.
void for_each_subset(i64 window, int min_size, int max_size,
                     const std::function<void(const IntSet&)>& fn);

/// Every coprime vector of nonzero entries with k in [k_min, k_max] and
/// l1 norm at most max_l1, in a fixed deterministic order.
[[nodiscard]] std::vector<DilateVector> coprime_vectors(
    int k_min, int k_max, i64 max_l1, bool positive_only = false);

/// The coprime vectors above restricted to zero coefficient sum.
[[nodiscard]] std::vector<DilateVector> zero_sum_coprime_vectors(int k_max,
                                                                 i64 max_l1);

}  // namespace dilatelab
