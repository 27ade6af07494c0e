#include "dilatelab/corpus.hpp"

#include <bit>
#include <set>
#include <stdexcept>

#include "dilatelab/setcore.hpp"

namespace dilatelab {

std::uint64_t Rng::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::next_below: n must be > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    const std::uint64_t v = engine_();
    if (v < limit) return v % n;
  }
}

IntSet random_subset(Rng& rng, int m, i64 window) {
  if (m < 1 || static_cast<i64>(m) > window) {
    throw std::invalid_argument("random_subset: infeasible size");
  }
  std::set<i64> chosen;
  while (chosen.size() < static_cast<std::size_t>(m)) {
    chosen.insert(static_cast<i64>(
        rng.next_below(static_cast<std::uint64_t>(window))));
  }
  return IntSet(std::vector<i64>(chosen.begin(), chosen.end()));
}

DilateVector random_coprime_vector(Rng& rng, int k_min, int k_max,
                                   i64 max_l1) {
  if (k_min < 1 || k_max < k_min) {
    throw std::invalid_argument("random_coprime_vector: bad k range");
  }
  for (;;) {
    const int k = k_min + static_cast<int>(rng.next_below(
                              static_cast<std::uint64_t>(k_max - k_min + 1)));
    if (max_l1 < k) {
      throw std::invalid_argument("random_coprime_vector: budget below k");
    }
    std::vector<i64> coeffs;
    i64 budget = max_l1;
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      const i64 room = budget - (k - 1 - i);  // leave >= 1 per later entry
      if (room < 1) {
        ok = false;
        break;
      }
      const i64 magnitude =
          1 + static_cast<i64>(rng.next_below(static_cast<std::uint64_t>(room)));
      const bool negative = rng.next_below(2) == 1;
      coeffs.push_back(negative ? -magnitude : magnitude);
      budget -= magnitude;
    }
    if (!ok) continue;
    DilateVector v(std::move(coeffs));
    if (v.is_coprime()) return v;
  }
}

void for_each_subset(i64 window, int min_size, int max_size,
                     const std::function<void(const IntSet&)>& fn) {
  if (window < 1 || window > 24) {
    throw std::invalid_argument("for_each_subset: window must be in [1, 24]");
  }
  const std::uint32_t top = std::uint32_t{1} << window;
  std::vector<i64> elems;
  for (std::uint32_t mask = 1; mask < top; ++mask) {
    const int size = std::popcount(mask);
    if (size < min_size || size > max_size) continue;
    elems.clear();
    std::uint32_t rest = mask;
    while (rest != 0) {
      elems.push_back(std::countr_zero(rest));
      rest &= rest - 1;
    }
    fn(IntSet(elems));
  }
}

namespace {

void extend_vectors(std::vector<i64>& current, int k_target, i64 budget,
                    bool positive_only, std::vector<DilateVector>& out) {
  if (static_cast<int>(current.size()) == k_target) {
    DilateVector v(current);
    if (v.is_coprime()) out.push_back(std::move(v));
    return;
  }
  const int slots_left = k_target - static_cast<int>(current.size());
  const i64 max_here = budget - (slots_left - 1);
  for (i64 c = positive_only ? 1 : -max_here; c <= max_here; ++c) {
    if (c == 0) continue;
    const i64 mag = c < 0 ? -c : c;
    if (mag > max_here) continue;
    current.push_back(c);
    extend_vectors(current, k_target, budget - mag, positive_only, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<DilateVector> coprime_vectors(int k_min, int k_max, i64 max_l1,
                                          bool positive_only) {
  if (k_min < 1 || k_max < k_min) {
    throw std::invalid_argument("coprime_vectors: bad k range");
  }
  std::vector<DilateVector> out;
  for (int k = k_min; k <= k_max; ++k) {
    if (max_l1 < k) continue;
    std::vector<i64> current;
    extend_vectors(current, k, max_l1, positive_only, out);
  }
  return out;
}

std::vector<DilateVector> zero_sum_coprime_vectors(int k_max, i64 max_l1) {
  std::vector<DilateVector> out;
  for (const DilateVector& v : coprime_vectors(2, k_max, max_l1)) {
    if (v.sum() == 0) out.push_back(v);
  }
  return out;
}

}  // namespace dilatelab
