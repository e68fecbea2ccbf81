#include "venq/qseries.hpp"

#include <cmath>
#include <functional>

namespace venq {

void setClassicalDigits(unsigned digits) {
  if (digits < 10) throw DomainError("classical precision must be >= 10 digits");
  Real::default_precision(digits);
}

unsigned classicalDigits() { return Real::default_precision(); }

namespace {

struct PrecisionGuard {
  PrecisionGuard() {
    if (Real::default_precision() < 10) Real::default_precision(50);
  }
};

Real toleranceReal(double tol) { return Real(tol); }

// Infinite product driver: multiplies factor(m) for m = 0,1,2,... and stops
// once doubling the truncation moves the value by less than the relative
// tolerance. factor must return exact 1 for skipped indices.
Real adaptiveProduct(const std::function<Real(std::uint64_t)>& factor,
                     const TruncationPolicy& policy, TruncationInfo* info,
                     const char* what) {
  PrecisionGuard guard;
  Real prod(1);
  Real prev(0);
  bool hasPrev = false;
  std::uint64_t m = 0;
  std::size_t target = policy.initialTerms;
  const Real tol = toleranceReal(policy.tolerance);
  double achieved = 0.0;
  while (target <= policy.maxTerms) {
    for (; m < target; ++m) {
      Real f = factor(m);
      if (f == 0)
        throw PoleError(std::string(what) + ": factor vanishes at m = " +
                            std::to_string(m),
                        static_cast<long long>(m));
      prod *= f;
    }
    if (hasPrev) {
      Real rel = abs(prod - prev) / abs(prod);
      achieved = static_cast<double>(rel);
      if (rel <= tol) {
        if (info) {
          info->termsUsed = m;
          info->achievedTolerance = achieved;
        }
        return prod;
      }
    }
    prev = prod;
    hasPrev = true;
    target *= 2;
  }
  throw TruncationError(std::string(what) + ": no agreement within " +
                            std::to_string(policy.maxTerms) + " terms",
                        achieved, static_cast<std::size_t>(m));
}

}  // namespace

QReal::QReal(const Real& v) : value_(v) {
  if (!(v > 0 && v < 1))
    throw DomainError("QReal: q must satisfy 0 < q < 1, got " + v.str(10));
}

QReal QReal::parse(const std::string& decimal) {
  PrecisionGuard guard;
  try {
    return QReal(Real(decimal));
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("invalid decimal literal: '" + decimal + "'");
  }
}

std::uint64_t nuP(std::uint64_t n, const Prime& p) { return n / p.value(); }

Real qPochhammer(const Real& a, const Real& q, std::uint64_t n) {
  Real prod(1), qm(1);
  for (std::uint64_t m = 0; m < n; ++m) {
    prod *= (1 - qm * a);
    qm *= q;
  }
  return prod;
}

Rational qPochhammer(const Rational& a, const Rational& q, std::uint64_t n) {
  Rational prod(1), qm(1);
  for (std::uint64_t m = 0; m < n; ++m) {
    prod *= (1 - qm * a);
    qm *= q;
  }
  return prod;
}

Real qPochhammerP(const Real& a, const Real& q, std::uint64_t n,
                  const Prime& p) {
  Real prod(1), qm(1);
  for (std::uint64_t m = 0; m < n; ++m) {
    if ((m + 1) % p.value() != 0) prod *= (1 - qm * a);
    qm *= q;
  }
  return prod;
}

Rational qPochhammerP(const Rational& a, const Rational& q, std::uint64_t n,
                      const Prime& p) {
  Rational prod(1), qm(1);
  for (std::uint64_t m = 0; m < n; ++m) {
    if ((m + 1) % p.value() != 0) prod *= (1 - qm * a);
    qm *= q;
  }
  return prod;
}

Real qPochhammerInf(const Real& a, const QReal& q,
                    const TruncationPolicy& policy, TruncationInfo* info) {
  Real t(a);  // q^m * a
  const Real& qq = q.value();
  return adaptiveProduct(
      [&t, &qq](std::uint64_t) {
        Real f = 1 - t;
        t *= qq;
        return f;
      },
      policy, info, "(a;q)_inf");
}

RestrictedSymbol qPochhammerPInf(const Real& a, const QReal& q, const Prime& p,
                                 const TruncationPolicy& policy,
                                 TruncationInfo* info) {
  Real t(a);
  const Real& qq = q.value();
  const std::uint64_t pv = p.value();
  Real value = adaptiveProduct(
      [&t, &qq, pv](std::uint64_t m) {
        Real f(1);
        if ((m + 1) % pv != 0) f = 1 - t;
        t *= qq;
        return f;
      },
      policy, info, "(a;q)_{p,inf}");
  return RestrictedSymbol{a, q.value(), std::nullopt, p, value};
}

Real gammaQShifted(const Real& x, const QReal& q,
                   const TruncationPolicy& policy) {
  return gammaQ(x + 1, q, policy);
}

Real gammaQ(const Real& x, const QReal& q, const TruncationPolicy& policy) {
  PrecisionGuard guard;
  if (x <= 0 && x == floor(x)) {
    long long m = static_cast<long long>(-x);
    throw PoleError("Gamma_q has a pole at the nonpositive integer x = -" +
                        std::to_string(m) + " (denominator factor m = " +
                        std::to_string(m) + ")",
                    m);
  }
  const Real& qq = q.value();
  Real qx = pow(qq, x);
  Real num = qPochhammerInf(qq, q, policy);
  Real den = qPochhammerInf(qx, q, policy);
  return pow(1 - qq, 1 - x) * num / den;
}

Rational qFactorial(unsigned n, const Rational& q) {
  if (q == 1) throw DomainError("qFactorial: q = 1");
  Rational prod(1), qj(1);
  const Rational d = 1 - q;
  for (unsigned j = 1; j <= n; ++j) {
    qj *= q;
    prod *= (1 - qj) / d;
  }
  return prod;
}

TwoSidedReport verifyQBinomial(const Real& alpha, const Real& z, const QReal& q,
                               const TruncationPolicy& policy) {
  PrecisionGuard guard;
  if (!(abs(z) < 1))
    throw DomainError("q-binomial theorem requires |z| < 1");
  const Real& qq = q.value();
  const Real qa = pow(qq, alpha);

  TruncationInfo infoNum, infoDen;
  Real lhs = qPochhammerInf(z * qa, q, policy, &infoNum) /
             qPochhammerInf(z, q, policy, &infoDen);

  // Series side: term_m = term_{m-1} * (1 - q^(alpha+m-1)) / (1 - q^m) * z.
  Real sum(1), term(1);
  Real u = qa;  // q^(alpha+m-1)
  Real v(1);    // q^(m-1)
  const Real tol = Real(policy.tolerance);
  std::size_t seriesTerms = 0;
  int quietTerms = 0;
  for (std::size_t m = 1; m <= policy.maxTerms; ++m) {
    v *= qq;  // q^m
    Real den = 1 - v;
    term *= (1 - u) / den * z;
    u *= qq;
    sum += term;
    seriesTerms = m;
    if (abs(term) <= tol * abs(sum)) {
      if (++quietTerms >= 3) break;
    } else {
      quietTerms = 0;
    }
  }
  if (quietTerms < 3)
    throw TruncationError("q-binomial series did not settle",
                          static_cast<double>(abs(term) / abs(sum)),
                          seriesTerms);

  Real diff = abs(lhs - sum);
  std::size_t used =
      std::max({infoNum.termsUsed, infoDen.termsUsed, seriesTerms});
  bool met = diff <= tol * std::max(abs(lhs), abs(sum));
  return TwoSidedReport{lhs, sum, diff, used, policy.tolerance, met};
}

Real ratioRestricted(const Real& alpha, const Real& z, const QReal& q,
                     const Prime& p, const TruncationPolicy& policy,
                     TruncationInfo* info) {
  PrecisionGuard guard;
  if (!(abs(z) < 1)) throw DomainError("restricted ratio requires |z| < 1");
  const Real& qq = q.value();
  const Real qa = pow(qq, alpha);
  Real u(z);  // q^m z
  const std::uint64_t pv = p.value();
  return adaptiveProduct(
      [&u, &qq, &qa, pv](std::uint64_t m) {
        Real f(1);
        if ((m + 1) % pv != 0) {
          Real den = 1 - u;
          if (den == 0)
            throw PoleError("restricted ratio: denominator factor vanishes "
                            "at m = " + std::to_string(m),
                            static_cast<long long>(m));
          f = (1 - qa * u) / den;
        }
        u *= qq;
        return f;
      },
      policy, info, "restricted ratio");
}

Real ratioRestrictedFixed(const Real& alpha, const Real& z, const QReal& q,
                          const Prime& p, std::size_t terms) {
  PrecisionGuard guard;
  if (!(abs(z) < 1)) throw DomainError("restricted ratio requires |z| < 1");
  const Real& qq = q.value();
  const Real qa = pow(qq, alpha);
  Real u(z);
  Real num(1), den(1);
  const std::uint64_t pv = p.value();
  for (std::size_t m = 0; m < terms; ++m) {
    if ((m + 1) % pv != 0) {
      num *= (1 - qa * u);
      den *= (1 - u);
    }
    u *= qq;
  }
  if (den == 0)
    throw PoleError("restricted ratio: denominator vanished", -1);
  return num / den;
}

TwoSidedReport verifyRatioIdentity(const Real& alpha, const Real& z,
                                   const QReal& q, const Prime& p,
                                   const TruncationPolicy& policy) {
  PrecisionGuard guard;
  TruncationInfo infoL;
  Real lhs = ratioRestricted(alpha, z, q, p, policy, &infoL);

  const Real& qq = q.value();
  const Real qa = pow(qq, alpha);
  const Real qPrime = pow(qq, static_cast<int>(p.value()));
  const Real zPrime = pow(qq, static_cast<int>(p.value() - 1)) * z;
  QReal qP{qPrime};

  TruncationInfo i1, i2, i3, i4;
  Real top = qPochhammerInf(qa * z, q, policy, &i1) /
             qPochhammerInf(z, q, policy, &i2);
  // (q')^(alpha/p) = q^alpha, so the primed ratio reuses qa directly.
  Real bottom = qPochhammerInf(qa * zPrime, qP, policy, &i3) /
                qPochhammerInf(zPrime, qP, policy, &i4);
  Real rhs = top / bottom;

  Real diff = abs(lhs - rhs);
  std::size_t used = std::max({infoL.termsUsed, i1.termsUsed, i2.termsUsed,
                               i3.termsUsed, i4.termsUsed});
  bool met = diff <= Real(policy.tolerance) * std::max(abs(lhs), abs(rhs));
  return TwoSidedReport{lhs, rhs, diff, used, policy.tolerance, met};
}

}  // namespace venq
