#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace dilatelab {

using i64 = std::int64_t;

/// A finite set of integers stored as a strictly increasing sequence.
///
/// IntSet is an immutable value type: every operation that "modifies" a set
/// returns a new one. min()/max() are O(1), membership is O(log n).
/// All elements must fit in signed 64 bits; arithmetic on sets checks for
/// overflow and throws std::overflow_error instead of wrapping.
class IntSet {
 public:
  IntSet() = default;

  /// Takes a strictly increasing sequence. Throws std::invalid_argument if
  /// the sequence is unsorted or contains duplicates.
  explicit IntSet(std::vector<i64> sorted_unique);

  /// Builds a set from arbitrary values (sorts and deduplicates).
  static IntSet from_values(std::vector<i64> values);
  static IntSet of(std::initializer_list<i64> values);

  /// For callers whose output is strictly increasing by construction
  /// (kernel emit paths); checked only by a debug assertion.
  static IntSet from_sorted_unchecked(std::vector<i64> sorted_unique);

  /// The interval {lo, lo+1, ..., hi}. Requires lo <= hi.
  static IntSet interval(i64 lo, i64 hi);

  [[nodiscard]] std::size_t size() const noexcept { return elems_.size(); }
  [[nodiscard]] bool empty() const noexcept { return elems_.empty(); }

  /// Smallest / largest element. Throw std::domain_error on the empty set.
  [[nodiscard]] i64 min() const;
  [[nodiscard]] i64 max() const;

  [[nodiscard]] i64 operator[](std::size_t i) const { return elems_[i]; }
  [[nodiscard]] bool contains(i64 x) const;

  [[nodiscard]] std::span<const i64> elements() const noexcept {
    return elems_;
  }
  [[nodiscard]] auto begin() const noexcept { return elems_.begin(); }
  [[nodiscard]] auto end() const noexcept { return elems_.end(); }

  /// Width of the enclosing window, max - min + 1. Requires nonempty.
  [[nodiscard]] i64 span() const;

  [[nodiscard]] IntSet translated(i64 t) const;
  /// The mirror image {max - a : a in A}. Requires nonempty.
  [[nodiscard]] IntSet reflected() const;

  bool operator==(const IntSet&) const = default;
  std::strong_ordering operator<=>(const IntSet& other) const {
    return std::lexicographical_compare_three_way(
        elems_.begin(), elems_.end(), other.elems_.begin(),
        other.elems_.end());
  }

 private:
  std::vector<i64> elems_;
};

/// x -> scale * x + shift with scale >= 1. Inverts what normalize() did.
struct AffineMap {
  i64 shift = 0;
  i64 scale = 1;

  [[nodiscard]] i64 apply(i64 x) const;
  [[nodiscard]] IntSet apply(const IntSet& s) const;
  bool operator==(const AffineMap&) const = default;
};

}  // namespace dilatelab
