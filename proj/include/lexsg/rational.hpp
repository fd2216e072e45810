// Copyright 2026 The lexsg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace lexsg {

// Exact probabilities and values. Always kept in canonical form.
using Rational = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// num/den in canonical form.
inline Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Malformed input text (game files, strategy files, CLI vectors).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Structurally invalid models, objectives, filters or strategies.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Iteration or enumeration budgets exhausted.
class LimitError : public Error {
 public:
  using Error::Error;
};

// Parses "a/b", integers and plain decimals ("0.01", ".5") exactly.
// Returns nullopt on anything else.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) return std::nullopt;
  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d{std::string(den), 10};
    if (d == 0) return std::nullopt;
    result = Rational(mpz_class{std::string(num), 10}, d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !all_digits(whole)) return std::nullopt;
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    std::string digits = std::string(whole) + std::string(frac);
    result = Rational(mpz_class(digits.empty() ? "0" : digits, 10), scale);
  } else {
    if (!all_digits(text)) return std::nullopt;
    result = Rational(mpz_class(std::string(text), 10));
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

inline Rational parse_rational(std::string_view text) {
  auto r = try_parse_rational(text);
  if (!r) throw ParseError(0, "not a number: '" + std::string(text) + "'");
  return *r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Nine significant digits, the VI-mode display precision.
inline std::string to_string(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double x) { return x; }

// Conversion from exact input data into a solver value type.
template <class V>
V from_rational(const Rational& r);
template <>
inline Rational from_rational<Rational>(const Rational& r) {
  return r;
}
template <>
inline double from_rational<double>(const Rational& r) {
  return r.get_d();
}

template <class V>
inline constexpr bool kExact = std::is_same_v<V, Rational>;

template <class V>
std::strong_ordering three_way(const V& a, const V& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace lexsg
