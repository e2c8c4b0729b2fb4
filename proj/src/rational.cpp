// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#include "cachedof/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace cachedof {

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

BigInt parse_integer(std::string_view s, bool allow_sign) {
  if (s.empty()) throw std::invalid_argument("empty integer in rational literal");
  std::size_t pos = 0;
  bool negative = false;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) throw std::invalid_argument("missing digits in rational literal");
  BigInt value = 0;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("bad character in rational literal: " + std::string(s));
    }
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, true));
  const BigInt num = parse_integer(trim(text.substr(0, slash)), true);
  const BigInt den = parse_integer(trim(text.substr(slash + 1)), false);
  if (den == 0) throw std::invalid_argument("zero denominator in rational literal");
  return Rational(num, den);
}

BigInt ipow(const BigInt& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

}  // namespace cachedof
