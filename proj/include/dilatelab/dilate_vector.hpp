#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "dilatelab/intset.hpp"

namespace dilatelab {

/// A coefficient vector (c_1, ..., c_k) of nonzero integers, together with
/// the derived quantities that the set operations and verifiers need:
/// gcd, the norms, the coefficient sum, and for k >= 2 the per-index
/// values tau(i) = gcd of the vector with entry i removed.
class DilateVector {
 public:
  /// Throws std::invalid_argument if empty or any coefficient is zero.
  explicit DilateVector(std::vector<i64> coeffs);
  static DilateVector of(std::initializer_list<i64> coeffs);

  [[nodiscard]] std::size_t k() const noexcept { return coeffs_.size(); }
  [[nodiscard]] i64 coeff(std::size_t i) const { return coeffs_[i]; }
  [[nodiscard]] std::span<const i64> coeffs() const noexcept {
    return coeffs_;
  }

  [[nodiscard]] i64 gcd() const noexcept { return gcd_; }
  [[nodiscard]] i64 l1_norm() const noexcept { return l1_; }
  [[nodiscard]] i64 linf_norm() const noexcept { return linf_; }
  [[nodiscard]] i64 sum() const noexcept { return sum_; }
  [[nodiscard]] bool is_coprime() const noexcept { return gcd_ == 1; }

  /// gcd of all coefficients except the i-th. Requires k >= 2.
  [[nodiscard]] i64 tau(std::size_t i) const;
  [[nodiscard]] std::vector<i64> taus() const;

  /// The vector with entry i removed. Requires k >= 2.
  [[nodiscard]] DilateVector removed(std::size_t i) const;

  bool operator==(const DilateVector&) const = default;

 private:
  std::vector<i64> coeffs_;
  i64 gcd_ = 1;
  i64 l1_ = 0;
  i64 linf_ = 0;
  i64 sum_ = 0;
};

/// Divides out the gcd: returns (g, v/g) with v/g coprime.
[[nodiscard]] std::pair<i64, DilateVector> gcd_reduce(const DilateVector& v);

}  // namespace dilatelab
