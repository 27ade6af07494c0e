#pragma once

#include <cstdint>

#include "dilatelab/dilate_vector.hpp"
#include "dilatelab/intset.hpp"

namespace dilatelab {

/// Which arithmetic kernel the set operations use.
///
/// kAuto picks the offset-bitset path when the result window fits the
/// configured bit budget and falls back to sorted k-way merging otherwise.
/// The two forced modes exist so tests can cross-check the paths against
/// each other on the same inputs.
enum class Kernel { kAuto, kBitset, kMerge };

inline constexpr i64 kDefaultBitsetBudgetBits = i64{1} << 20;

struct OpConfig {
  i64 bitset_budget_bits = kDefaultBitsetBudgetBits;
  Kernel kernel = Kernel::kAuto;
};

/// {lambda * a : a in A}. lambda == 0 yields {0}. Requires A nonempty;
/// throws std::overflow_error if any product leaves the 64-bit range.
[[nodiscard]] IntSet dilate(const IntSet& a, i64 lambda);

/// {x + y : x in A, y in B}. Requires both nonempty.
[[nodiscard]] IntSet sumset(const IntSet& a, const IntSet& b,
                            const OpConfig& cfg = {});

/// A + (-1)*B.
[[nodiscard]] IntSet difference_set(const IntSet& a, const IntSet& b,
                                    const OpConfig& cfg = {});

/// The h-fold sumset {a_1 + ... + a_h}. h == 0 yields {0}, h == 1 yields A.
[[nodiscard]] IntSet repeated_add(i64 h, const IntSet& a,
                                  const OpConfig& cfg = {});

/// c_1*A + c_2*A + ... + c_k*A, folded left to right over the coefficients.
/// The result does not depend on the fold order.
[[nodiscard]] IntSet dilate_sum(const DilateVector& v, const IntSet& a,
                                const OpConfig& cfg = {});

struct Normalized {
  IntSet set;
  AffineMap map;  // map.apply(set) reconstructs the input
};

/// Canonicalizes under translation and dilation: the result has min 0 and
/// the gcd of its nonzero elements is 1 (a singleton becomes {0}).
/// Idempotent. Requires nonempty.
[[nodiscard]] Normalized normalize(const IntSet& a);

/// a + b / a * b with an overflow check; throw std::overflow_error.
[[nodiscard]] i64 checked_add(i64 a, i64 b);
[[nodiscard]] i64 checked_mul(i64 a, i64 b);

/// gcd on possibly-negative inputs; gcd(0, 0) == 0.
[[nodiscard]] i64 gcd_i64(i64 a, i64 b);

}  // namespace dilatelab
