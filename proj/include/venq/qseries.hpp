#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <cstdint>
#include <optional>
#include <string>

#include "venq/errors.hpp"
#include "venq/padic.hpp"
#include "venq/rational.hpp"

namespace venq {

// High-precision scalar for the classical (0 < q < 1) engine. Precision is a
// process-wide decimal digit count, default 50.
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

void setClassicalDigits(unsigned digits);
unsigned classicalDigits();

// Deformation parameter for infinite products/sums: requires 0 < q < 1.
class QReal {
 public:
  explicit QReal(const Real& v);
  static QReal parse(const std::string& decimal);
  const Real& value() const noexcept { return value_; }

 private:
  Real value_;
};

struct TruncationPolicy {
  double tolerance = 1e-20;         // relative agreement target
  std::size_t maxTerms = 1'000'000;  // hard cap
  std::size_t initialTerms = 32;     // doubled until agreement
};

struct TruncationInfo {
  std::size_t termsUsed = 0;
  double achievedTolerance = 0.0;
};

// Multiples of p up to and including n: floor(n/p).
std::uint64_t nuP(std::uint64_t n, const Prime& p);

// (a;q)_n = prod_{m=0}^{n-1} (1 - q^m a); exact for rational inputs.
Real qPochhammer(const Real& a, const Real& q, std::uint64_t n);
Rational qPochhammer(const Rational& a, const Rational& q, std::uint64_t n);

// (a;q)_{p,n}: the same product skipping every m with p | m+1.
Real qPochhammerP(const Real& a, const Real& q, std::uint64_t n,
                  const Prime& p);
Rational qPochhammerP(const Rational& a, const Rational& q, std::uint64_t n,
                      const Prime& p);

// (a;q)_inf, truncated per policy (doubling with agreement check).
Real qPochhammerInf(const Real& a, const QReal& q,
                    const TruncationPolicy& policy = {},
                    TruncationInfo* info = nullptr);

struct RestrictedSymbol {
  Real a;
  Real q;
  std::optional<std::uint64_t> n;  // empty means infinite
  Prime p;
  Real value;
};

RestrictedSymbol qPochhammerPInf(const Real& a, const QReal& q, const Prime& p,
                                 const TruncationPolicy& policy = {},
                                 TruncationInfo* info = nullptr);

// Gamma_q(x) = (1-q)^(1-x) (q;q)_inf / (q^x;q)_inf.
Real gammaQ(const Real& x, const QReal& q, const TruncationPolicy& policy = {});
// The shifted form Gamma_q(x+1) = (1-q)^(-x) prod (1-q^m)/(1-q^(x+m)).
Real gammaQShifted(const Real& x, const QReal& q,
                   const TruncationPolicy& policy = {});

// [n]_q! = prod_{j=1}^{n} (1-q^j)/(1-q), exact.
Rational qFactorial(unsigned n, const Rational& q);

struct TwoSidedReport {
  Real lhs;
  Real rhs;
  Real absDiff;
  std::size_t truncationUsed;
  double tolerance;
  bool toleranceMet;  // absDiff <= tolerance * max(|lhs|, |rhs|)
};

// (z q^alpha; q)_inf / (z; q)_inf  against  sum_m ((q^alpha;q)_m/(q;q)_m) z^m,
// evaluated independently.
TwoSidedReport verifyQBinomial(const Real& alpha, const Real& z, const QReal& q,
                               const TruncationPolicy& policy = {});

// (q^alpha z; q)_{p,inf} / (z; q)_{p,inf} as a single ratio product.
Real ratioRestricted(const Real& alpha, const Real& z, const QReal& q,
                     const Prime& p, const TruncationPolicy& policy = {},
                     TruncationInfo* info = nullptr);
// Fixed-budget variant for q -> 1 scans where adaptive doubling is too blunt.
Real ratioRestrictedFixed(const Real& alpha, const Real& z, const QReal& q,
                          const Prime& p, std::size_t terms);

// Restricted ratio against the ordinary-symbol form with q' = q^p,
// z' = q^(p-1) z and (q')^(alpha/p) = q^alpha.
TwoSidedReport verifyRatioIdentity(const Real& alpha, const Real& z,
                                   const QReal& q, const Prime& p,
                                   const TruncationPolicy& policy = {});

}  // namespace venq
