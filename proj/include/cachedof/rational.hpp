// Copyright 2026 The cachedof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace cachedof {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Renders "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

/// Accepts "p/q", "p", with optional sign on the numerator.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

inline Rational make_rational(long long num, long long den = 1) { return Rational(num, den); }

BigInt ipow(const BigInt& base, unsigned exp);

}  // namespace cachedof
