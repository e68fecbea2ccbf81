#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "venq/errors.hpp"

namespace venq {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exponent of the largest power of p dividing n; n must be nonzero.
long long padicValuation(const BigInt& n, std::uint64_t p);
long long padicValuation(const Rational& r, std::uint64_t p);

BigInt powBigInt(const BigInt& base, unsigned long exp);

// Inverse of a modulo m (m > 1, gcd(a, m) = 1), in [1, m).
BigInt modInverse(const BigInt& a, const BigInt& m);

// Canonical nonnegative residue in [0, m).
BigInt modReduce(const BigInt& a, const BigInt& m);

// Accepts "a" or "a/b" with optional sign; b must be nonzero.
Rational parseRational(const std::string& text);

std::string rationalToString(const Rational& r);

}  // namespace venq
