#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "venq/errors.hpp"
#include "venq/rational.hpp"

namespace venq {

// A prime certified by a deterministic Miller-Rabin check at construction.
class Prime {
 public:
  explicit Prime(std::uint64_t value);
  std::uint64_t value() const noexcept { return value_; }
  friend bool operator==(const Prime& a, const Prime& b) {
    return a.value_ == b.value_;
  }
  friend bool operator!=(const Prime& a, const Prime& b) { return !(a == b); }

 private:
  std::uint64_t value_;
};

bool isPrimeU64(std::uint64_t n);

// Element of Q_p with capped relative precision.
//
// A nonzero value is  p^valuation * unit  with  1 <= unit < p^precision,
// p not dividing unit; the value is known modulo p^(valuation + precision).
// A zero-class value means "zero up to O(p^k)": only the lower bound k on the
// valuation is known, carried in valuation() being unavailable and
// zeroBound() = k.
class PadicNumber {
 public:
  static PadicNumber fromInteger(const BigInt& n, const Prime& p, int precision);
  static PadicNumber fromRational(const BigInt& a, const BigInt& b,
                                  const Prime& p, int precision);
  static PadicNumber fromRational(const Rational& r, const Prime& p,
                                  int precision);
  // Value p^valuation * unit where unit is reduced mod p^precision and must
  // stay coprime to p after reduction.
  static PadicNumber fromUnit(const Prime& p, long long valuation,
                              const BigInt& unit, int precision);
  // Value p^valuation * residue where residue is any representative mod
  // p^digits; leading p-powers in residue are folded into the valuation.
  static PadicNumber fromResidue(const Prime& p, long long valuation,
                                 const BigInt& residue, int digits);
  static PadicNumber zeroClass(const Prime& p, long long bound);

  const Prime& prime() const noexcept { return p_; }
  bool isZeroClass() const noexcept { return zero_; }
  // Defined for nonzero classes only.
  long long valuation() const;
  // Defined for zero classes only: the value is O(p^bound).
  long long zeroBound() const;
  // Number of significant digits (0 for zero classes).
  int precision() const noexcept { return prec_; }
  // The value is known modulo p^absolutePrecision().
  long long absolutePrecision() const noexcept {
    return zero_ ? val_ : val_ + prec_;
  }
  const BigInt& unit() const;
  bool isUnit() const noexcept { return !zero_ && val_ == 0; }

  // Little-endian base-p digits of the unit, precision() entries.
  std::vector<std::uint32_t> digits() const;

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);

  PadicNumber inverse() const;
  PadicNumber pow(long long exponent) const;

  // Keep at most `digits` significant digits.
  PadicNumber truncated(int digits) const;

  // Exact representation equality (same class, valuation, unit, precision).
  friend bool operator==(const PadicNumber& a, const PadicNumber& b);
  friend bool operator!=(const PadicNumber& a, const PadicNumber& b) {
    return !(a == b);
  }

  // The two values agree to k significant digits: v_p(a-b) >= min common
  // valuation + k, as far as both are known.
  friend bool agreesTo(const PadicNumber& a, const PadicNumber& b, int k);

  // Valuation of a-b, capped at (and defaulting to) the known absolute
  // precision when the difference is indistinguishable from zero.
  friend long long differenceValuation(const PadicNumber& a,
                                       const PadicNumber& b);

  // Canonical text form, e.g. "5^2 * (2 + 0*5 + 1*5^2) + O(5^(5))" and
  // "O(5^(6))" for zero classes.
  std::string str() const;
  static PadicNumber parse(const std::string& text);

 private:
  PadicNumber(const Prime& p, long long val, BigInt unit, int prec, bool zero)
      : p_(p), val_(val), unit_(std::move(unit)), prec_(prec), zero_(zero) {}

  Prime p_;
  long long val_;
  BigInt unit_;
  int prec_;
  bool zero_;
};

// The unique n in [0, p^k) congruent to x mod p^k; requires x in Z_p and
// k within the known absolute precision.
BigInt integerRepresentative(const PadicNumber& x, int k);

// Deformation parameter q in Z_p with 0 < |q-1|_p < 1.
class PadicQ {
 public:
  explicit PadicQ(const PadicNumber& q);
  static PadicQ fromRational(const Rational& r, const Prime& p, int precision);

  const PadicNumber& number() const noexcept { return q_; }
  const Prime& prime() const noexcept { return q_.prime(); }
  // v_p(q - 1) >= 1.
  int deltaValuation() const noexcept { return delta_val_; }

 private:
  PadicQ(PadicNumber q, int dv) : q_(std::move(q)), delta_val_(dv) {}
  PadicNumber q_;
  int delta_val_;
};

// q^x for x in Z_p, via the binomial series sum_n C(x,n)(q-1)^n truncated
// when n*v_p(q-1) exceeds the working precision. Callers wanting N verified
// digits should supply inputs carrying N + ceil(M/(p-1)) + 2 digits, M the
// truncation index, to absorb the divisions by n! in the recurrence.
PadicNumber qPower(const PadicQ& q, const PadicNumber& x);

}  // namespace venq
