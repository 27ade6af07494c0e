#pragma once

#include <doctest.h>

#include "dilatelab/text.hpp"

namespace dilatelab {

inline doctest::String toString(const IntSet& s) {
  return doctest::String(to_text(s).c_str());
}

inline doctest::String toString(const DilateVector& v) {
  return doctest::String(to_text(v).c_str());
}

}  // namespace dilatelab
