#pragma once

#include <json.hpp>

#include <string>

#include "dilatelab/dilate_vector.hpp"
#include "dilatelab/rational.hpp"

namespace dilatelab {

/// One verified inequality instance. Every report is normalized so that the
/// claim under test reads lhs <= rhs; for the lower-bound facts the bound
/// goes on the left. slack = rhs - lhs, so holds implies slack >= 0.
/// witness carries check-specific payload (cover translates, digit matrix,
/// doubling data) and is null when there is nothing to attach.
struct InequalityReport {
  std::string name;
  Rat lhs;
  Rat rhs;
  bool holds = false;
  Rat slack;
  nlohmann::json witness;

  static InequalityReport make(std::string name, Rat lhs, Rat rhs,
                               nlohmann::json witness = nullptr);
};

/// Rationals serialize as an integer when the denominator is 1 and fit in
/// 64 bits, otherwise as the string "p/q".
[[nodiscard]] nlohmann::json rat_to_json(const Rat& q);

[[nodiscard]] nlohmann::json to_json(const InequalityReport& r);

[[nodiscard]] nlohmann::json to_json(const IntSet& s);

[[nodiscard]] nlohmann::json to_json(const DilateVector& v);

}  // namespace dilatelab
