#pragma once

#include <string>
#include <string_view>

#include "dilatelab/dilate_vector.hpp"
#include "dilatelab/intset.hpp"
#include "dilatelab/rational.hpp"

namespace dilatelab {

// Text forms used by the CLI and the CSV reports. Whitespace between tokens
// is ignored; integers may carry a unary minus.
//
//   set literal:     [0,1,3,4]      (also [] for the empty set)
//   dilate vector:   (1,-3)
//   rational:        1/4  or  2

[[nodiscard]] IntSet parse_int_set(std::string_view text);
[[nodiscard]] DilateVector parse_dilate_vector(std::string_view text);
[[nodiscard]] Rat parse_rational(std::string_view text);

[[nodiscard]] std::string to_text(const IntSet& s);
[[nodiscard]] std::string to_text(const DilateVector& v);

}  // namespace dilatelab
