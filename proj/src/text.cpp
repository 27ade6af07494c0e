#include "dilatelab/text.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace dilatelab {

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool done() {
    skip_ws();
    return pos == text.size();
  }
};

i64 parse_i64(Cursor& cur, const char* what) {
  cur.skip_ws();
  const std::size_t start = cur.pos;
  if (cur.pos < cur.text.size() &&
      (cur.text[cur.pos] == '-' || cur.text[cur.pos] == '+')) {
    ++cur.pos;
  }
  std::size_t digits = 0;
  while (cur.pos < cur.text.size() &&
         std::isdigit(static_cast<unsigned char>(cur.text[cur.pos]))) {
    ++cur.pos;
    ++digits;
  }
  if (digits == 0) {
    throw std::invalid_argument(std::string("malformed ") + what +
                                ": expected an integer");
  }
  const std::string token(cur.text.substr(start, cur.pos - start));
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(token.c_str(), &end, 10);
  if (errno == ERANGE || end != token.c_str() + token.size()) {
    throw std::invalid_argument(std::string("malformed ") + what +
                                ": integer out of range: " + token);
  }
  return static_cast<i64>(value);
}

std::vector<i64> parse_list(std::string_view text, char open, char close,
                            const char* what, bool allow_empty) {
  Cursor cur{text};
  if (!cur.eat(open)) {
    throw std::invalid_argument(std::string("malformed ") + what +
                                ": expected '" + open + "'");
  }
  std::vector<i64> values;
  cur.skip_ws();
  if (cur.pos < cur.text.size() && cur.text[cur.pos] == close) {
    ++cur.pos;
  } else {
    for (;;) {
      values.push_back(parse_i64(cur, what));
      if (cur.eat(close)) break;
      if (!cur.eat(',')) {
        throw std::invalid_argument(std::string("malformed ") + what +
                                    ": expected ',' or '" + close + "'");
      }
    }
  }
  if (!cur.done()) {
    throw std::invalid_argument(std::string("malformed ") + what +
                                ": trailing characters");
  }
  if (values.empty() && !allow_empty) {
    throw std::invalid_argument(std::string("malformed ") + what +
                                ": must not be empty");
  }
  return values;
}

}  // namespace

IntSet parse_int_set(std::string_view text) {
  return IntSet::from_values(
      parse_list(text, '[', ']', "set literal", /*allow_empty=*/true));
}

DilateVector parse_dilate_vector(std::string_view text) {
  return DilateVector(
      parse_list(text, '(', ')', "dilate vector", /*allow_empty=*/false));
}

Rat parse_rational(std::string_view text) {
  Cursor cur{text};
  const i64 num = parse_i64(cur, "rational");
  i64 den = 1;
  if (cur.eat('/')) {
    den = parse_i64(cur, "rational");
    if (den == 0) {
      throw std::invalid_argument("malformed rational: zero denominator");
    }
  }
  if (!cur.done()) {
    throw std::invalid_argument("malformed rational: trailing characters");
  }
  return rat(num, den);
}

std::string to_text(const IntSet& s) {
  std::string out = "[";
  bool first = true;
  for (i64 x : s) {
    if (!first) out += ',';
    out += std::to_string(x);
    first = false;
  }
  out += ']';
  return out;
}

std::string to_text(const DilateVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.k(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(v.coeff(i));
  }
  out += ')';
  return out;
}

}  // namespace dilatelab
