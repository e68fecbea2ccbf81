#pragma once

#include <cstdint>

#include "venq/padic.hpp"
#include "venq/rational.hpp"

namespace venq {

struct GammaOptions {
  int initialGuardDigits = 2;  // doubled on approximant mismatch
  int maxGuardDigits = 16;
  // Ceiling on product terms per evaluation; generic Z_p arguments cost
  // O(p^(N+g)) modular multiplications.
  std::uint64_t costCeiling = 100'000'000ULL;
};

struct GammaValue {
  PadicNumber value;
  int verifiedDigits;      // digits confirmed by the two-approximant check
  BigInt approximantUsed;  // integer argument of the finite product
  std::uint64_t cost;      // modular multiplications spent
};

// Morita gamma at argument n+1: (-1)^(n+1) * prod_{m=1, p∤m}^{n} m,
// reduced mod p^modulusDigits. Exact finite product, cost O(n).
PadicNumber gammaPInt(const BigInt& n, const Prime& p, int modulusDigits,
                      const GammaOptions& opts = {});

// Same product kept as an exact signed integer (small n only).
BigInt gammaPIntExact(unsigned n, const Prime& p);

// Morita gamma on Z_p via continuity: evaluates the integer approximant of x
// at N+g digits and again at approximant + p^(N+g); returns once both agree
// to N digits, escalating the guard g otherwise.
GammaValue gammaP(const PadicNumber& x, int targetPrecision,
                  const GammaOptions& opts = {});

// q-extended gamma at argument n+1: (-1)^(n+1) * prod_{m=1, p∤m}^{n}
// (1-q^m)/(1-q), mod p^modulusDigits. Each factor is a p-adic unit; q must
// carry modulusDigits + v_p(q-1) digits.
PadicNumber gammaPqInt(const BigInt& n, const PadicQ& q, int modulusDigits,
                       const GammaOptions& opts = {});

// The same finite product evaluated exactly over Q for an arbitrary rational
// q (no p-adic domain condition; the product is a rational function of q).
Rational gammaPqIntRational(unsigned n, const Prime& p, const Rational& q);

// q-extended gamma on Z_p by continuity, same approximant scheme as gammaP.
GammaValue gammaPq(const PadicNumber& x, const PadicQ& q, int targetPrecision,
                   const GammaOptions& opts = {});

}  // namespace venq
