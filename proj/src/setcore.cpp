#include "dilatelab/setcore.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

namespace dilatelab {

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("integer overflow in set arithmetic");
  }
  return r;
}

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("integer overflow in set arithmetic");
  }
  return r;
}

i64 gcd_i64(i64 a, i64 b) {
  std::uint64_t x = a < 0 ? 0 - static_cast<std::uint64_t>(a)
                          : static_cast<std::uint64_t>(a);
  std::uint64_t y = b < 0 ? 0 - static_cast<std::uint64_t>(b)
                          : static_cast<std::uint64_t>(b);
  while (y != 0) {
    const std::uint64_t t = x % y;
    x = y;
    y = t;
  }
  if (x > static_cast<std::uint64_t>(INT64_MAX)) {
    throw std::overflow_error("gcd does not fit a signed 64-bit integer");
  }
  return static_cast<i64>(x);
}

namespace {

void require_nonempty(const IntSet& s, const char* op) {
  if (s.empty()) {
    throw std::invalid_argument(std::string(op) + ": empty set not allowed");
  }
}

/// Fixed window of bits with an integer base offset: bit i represents the
/// integer base + i. All heavy set arithmetic happens on these words.
class BitWindow {
 public:
  BitWindow(i64 base, i64 width)
      : base_(base),
        width_(width),
        words_(static_cast<std::size_t>((width + 63) / 64), 0) {}

  [[nodiscard]] std::uint64_t* raw_words() { return words_.data(); }

  [[nodiscard]] IntSet to_set() const {
    std::size_t count = 0;
    for (std::uint64_t w : words_) count += std::popcount(w);
    std::vector<i64> out;
    out.reserve(count);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        const int bit = std::countr_zero(w);
        out.push_back(base_ + static_cast<i64>(i * 64 + bit));
        w &= w - 1;
      }
    }
    return IntSet::from_sorted_unchecked(std::move(out));
  }

 private:
  i64 base_;
  i64 width_;
  std::vector<std::uint64_t> words_;
};

IntSet sumset_bitset(const IntSet& a, const IntSet& b, i64 base, i64 width) {
  // Shift a sparse mask of one set once per element of the other. The mask
  // keeps only its nonzero words, so sparse sets in wide windows cost
  // O(|mask set|) per shift instead of O(window/64). Iteration order is
  // chosen to minimize elements-times-mask-words.
  const bool a_is_mask =
      static_cast<std::uint64_t>(b.size()) * static_cast<std::uint64_t>(a.span()) <=
      static_cast<std::uint64_t>(a.size()) * static_cast<std::uint64_t>(b.span());
  const IntSet& mask_set = a_is_mask ? a : b;
  const IntSet& iter_set = a_is_mask ? b : a;

  std::vector<std::pair<std::uint32_t, std::uint64_t>> mask;
  mask.reserve(mask_set.size());
  const i64 mask_base = mask_set.min();
  for (i64 x : mask_set) {
    const i64 off = x - mask_base;
    const auto idx = static_cast<std::uint32_t>(off >> 6);
    const std::uint64_t bit = std::uint64_t{1} << (off & 63);
    if (!mask.empty() && mask.back().first == idx) {
      mask.back().second |= bit;
    } else {
      mask.emplace_back(idx, bit);
    }
  }

  BitWindow acc(base, width);
  auto* words = acc.raw_words();
  for (i64 y : iter_set) {
    const i64 shift = y - iter_set.min();
    const std::size_t word_shift = static_cast<std::size_t>(shift >> 6);
    const unsigned bit_shift = static_cast<unsigned>(shift & 63);
    if (bit_shift == 0) {
      for (const auto& [idx, w] : mask) words[idx + word_shift] |= w;
    } else {
      for (const auto& [idx, w] : mask) {
        words[idx + word_shift] |= w << bit_shift;
        const std::uint64_t spill = w >> (64 - bit_shift);
        if (spill != 0) words[idx + word_shift + 1] |= spill;
      }
    }
  }
  return acc.to_set();
}

IntSet sumset_merge(const IntSet& a, const IntSet& b) {
  // k-way merge of the rows {x + B : x in A}, rows keyed by the smaller set.
  const IntSet& rows = a.size() <= b.size() ? a : b;
  const IntSet& cols = a.size() <= b.size() ? b : a;
  using Entry = std::pair<i64, std::size_t>;  // (value, row index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<std::size_t> pos(rows.size(), 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    heap.emplace(rows[r] + cols[0], r);
  }
  std::vector<i64> out;
  out.reserve(rows.size() + cols.size());
  while (!heap.empty()) {
    const auto [value, r] = heap.top();
    heap.pop();
    if (out.empty() || out.back() != value) out.push_back(value);
    if (++pos[r] < cols.size()) {
      heap.emplace(rows[r] + cols[pos[r]], r);
    }
  }
  return IntSet::from_sorted_unchecked(std::move(out));
}

}  // namespace

IntSet dilate(const IntSet& a, i64 lambda) {
  require_nonempty(a, "dilate");
  if (lambda == 0) return IntSet::of({0});
  // The extremes bound every product, so check them once up front.
  (void)checked_mul(lambda, a.min());
  (void)checked_mul(lambda, a.max());
  std::vector<i64> v;
  v.reserve(a.size());
  for (i64 x : a) v.push_back(lambda * x);
  if (lambda < 0) std::reverse(v.begin(), v.end());
  return IntSet::from_sorted_unchecked(std::move(v));
}

IntSet sumset(const IntSet& a, const IntSet& b, const OpConfig& cfg) {
  require_nonempty(a, "sumset");
  require_nonempty(b, "sumset");
  const i64 lo = checked_add(a.min(), b.min());
  const i64 hi = checked_add(a.max(), b.max());
  const i64 width = checked_add(hi - lo, 1);
  const bool use_bitset =
      cfg.kernel == Kernel::kBitset ||
      (cfg.kernel == Kernel::kAuto && width <= cfg.bitset_budget_bits);
  return use_bitset ? sumset_bitset(a, b, lo, width) : sumset_merge(a, b);
}

IntSet difference_set(const IntSet& a, const IntSet& b, const OpConfig& cfg) {
  return sumset(a, dilate(b, -1), cfg);
}

IntSet repeated_add(i64 h, const IntSet& a, const OpConfig& cfg) {
  if (h < 0) {
    throw std::invalid_argument("repeated_add: negative multiplicity");
  }
  require_nonempty(a, "repeated_add");
  if (h == 0) return IntSet::of({0});
  if (h == 1) return a;
  // i*A + j*A == (i+j)*A, so doubling gives the same set as a linear fold.
  const IntSet half = repeated_add(h / 2, a, cfg);
  IntSet r = sumset(half, half, cfg);
  if (h % 2 == 1) r = sumset(r, a, cfg);
  return r;
}

IntSet dilate_sum(const DilateVector& v, const IntSet& a, const OpConfig& cfg) {
  require_nonempty(a, "dilate_sum");
  IntSet acc = dilate(a, v.coeff(0));
  for (std::size_t i = 1; i < v.k(); ++i) {
    acc = sumset(acc, dilate(a, v.coeff(i)), cfg);
  }
  return acc;
}

Normalized normalize(const IntSet& a) {
  require_nonempty(a, "normalize");
  const i64 shift = a.min();
  if (a.size() == 1) {
    return {IntSet::of({0}), AffineMap{shift, 1}};
  }
  i64 g = 0;
  for (i64 x : a) g = gcd_i64(g, x - shift);
  std::vector<i64> v;
  v.reserve(a.size());
  for (i64 x : a) v.push_back((x - shift) / g);
  return {IntSet(std::move(v)), AffineMap{shift, g}};
}

}  // namespace dilatelab
