#include "dilatelab/intset.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "dilatelab/setcore.hpp"

namespace dilatelab {

IntSet::IntSet(std::vector<i64> sorted_unique) : elems_(std::move(sorted_unique)) {
  for (std::size_t i = 1; i < elems_.size(); ++i) {
    if (elems_[i - 1] >= elems_[i]) {
      throw std::invalid_argument(
          "IntSet: elements must be strictly increasing");
    }
  }
}

IntSet IntSet::from_values(std::vector<i64> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  IntSet s;
  s.elems_ = std::move(values);
  return s;
}

IntSet IntSet::of(std::initializer_list<i64> values) {
  return from_values(std::vector<i64>(values));
}

IntSet IntSet::from_sorted_unchecked(std::vector<i64> sorted_unique) {
#ifndef NDEBUG
  for (std::size_t i = 1; i < sorted_unique.size(); ++i) {
    assert(sorted_unique[i - 1] < sorted_unique[i]);
  }
#endif
  IntSet s;
  s.elems_ = std::move(sorted_unique);
  return s;
}

IntSet IntSet::interval(i64 lo, i64 hi) {
  if (lo > hi) {
    throw std::invalid_argument("IntSet::interval: lo > hi");
  }
  std::vector<i64> v;
  v.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (i64 x = lo; x <= hi; ++x) v.push_back(x);
  IntSet s;
  s.elems_ = std::move(v);
  return s;
}

i64 IntSet::min() const {
  if (elems_.empty()) throw std::domain_error("IntSet::min on empty set");
  return elems_.front();
}

i64 IntSet::max() const {
  if (elems_.empty()) throw std::domain_error("IntSet::max on empty set");
  return elems_.back();
}

bool IntSet::contains(i64 x) const {
  return std::binary_search(elems_.begin(), elems_.end(), x);
}

i64 IntSet::span() const { return checked_add(max() - min(), 1); }

IntSet IntSet::translated(i64 t) const {
  std::vector<i64> v;
  v.reserve(elems_.size());
  for (i64 x : elems_) v.push_back(checked_add(x, t));
  IntSet s;
  s.elems_ = std::move(v);
  return s;
}

IntSet IntSet::reflected() const {
  const i64 m = max();
  std::vector<i64> v;
  v.reserve(elems_.size());
  for (auto it = elems_.rbegin(); it != elems_.rend(); ++it) {
    v.push_back(m - *it);
  }
  IntSet s;
  s.elems_ = std::move(v);
  return s;
}

i64 AffineMap::apply(i64 x) const {
  return checked_add(checked_mul(scale, x), shift);
}

IntSet AffineMap::apply(const IntSet& s) const {
  std::vector<i64> v;
  v.reserve(s.size());
  for (i64 x : s) v.push_back(apply(x));
  if (scale < 0) std::reverse(v.begin(), v.end());
  return IntSet(std::move(v));
}

}  // namespace dilatelab
