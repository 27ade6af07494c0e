#pragma once

#include <gmpxx.h>

#include <string>

#include "dilatelab/intset.hpp"

namespace dilatelab {

/// Exact rational arithmetic for the inequality verifiers. Cardinality
/// products and integer-exponent powers never touch floating point.
using Rat = mpq_class;

[[nodiscard]] inline Rat rat(i64 value) {
  return Rat(static_cast<long>(value));
}

[[nodiscard]] inline Rat rat(i64 num, i64 den) {
  Rat q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

/// base^exp for exp >= 0, exact.
[[nodiscard]] Rat rat_pow(const Rat& base, unsigned long exp);

/// "p/q", or just "p" when the denominator is 1.
[[nodiscard]] std::string rat_str(const Rat& q);

[[nodiscard]] double rat_double(const Rat& q);

}  // namespace dilatelab
