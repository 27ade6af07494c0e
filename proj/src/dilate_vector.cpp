#include "dilatelab/dilate_vector.hpp"

#include <stdexcept>

#include "dilatelab/setcore.hpp"

namespace dilatelab {

DilateVector::DilateVector(std::vector<i64> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw std::invalid_argument("DilateVector: needs at least one coefficient");
  }
  gcd_ = 0;
  for (i64 c : coeffs_) {
    if (c == 0) {
      throw std::invalid_argument("DilateVector: zero coefficient");
    }
    gcd_ = gcd_i64(gcd_, c);
    const i64 a = c < 0 ? -c : c;
    l1_ = checked_add(l1_, a);
    if (a > linf_) linf_ = a;
    sum_ = checked_add(sum_, c);
  }
}

DilateVector DilateVector::of(std::initializer_list<i64> coeffs) {
  return DilateVector(std::vector<i64>(coeffs));
}

i64 DilateVector::tau(std::size_t i) const {
  if (k() < 2) throw std::domain_error("DilateVector::tau requires k >= 2");
  i64 g = 0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (j != i) g = gcd_i64(g, coeffs_[j]);
  }
  return g;
}

std::vector<i64> DilateVector::taus() const {
  std::vector<i64> out;
  out.reserve(k());
  for (std::size_t i = 0; i < k(); ++i) out.push_back(tau(i));
  return out;
}

DilateVector DilateVector::removed(std::size_t i) const {
  if (k() < 2) {
    throw std::domain_error("DilateVector::removed requires k >= 2");
  }
  std::vector<i64> v;
  v.reserve(k() - 1);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (j != i) v.push_back(coeffs_[j]);
  }
  return DilateVector(std::move(v));
}

std::pair<i64, DilateVector> gcd_reduce(const DilateVector& v) {
  const i64 g = v.gcd();
  std::vector<i64> reduced;
  reduced.reserve(v.k());
  for (i64 c : v.coeffs()) reduced.push_back(c / g);
  return {g, DilateVector(std::move(reduced))};
}

}  // namespace dilatelab
