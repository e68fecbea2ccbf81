#include "venq/rational.hpp"

#include <boost/multiprecision/integer.hpp>
#include <cstdlib>
#include <sstream>

namespace venq {

long long padicValuation(const BigInt& n, std::uint64_t p) {
  if (n == 0) throw DomainError("padicValuation: argument is zero");
  BigInt m = abs(n);
  long long v = 0;
  const BigInt bp(p);
  // Strip by growing powers to keep the division count logarithmic.
  BigInt pw = bp;
  long long step = 1;
  while (m % pw == 0) {
    m /= pw;
    v += step;
    BigInt next = pw * pw;
    if (m % next != 0) break;
    pw = next;
    step *= 2;
  }
  while (m % bp == 0) {
    m /= bp;
    ++v;
  }
  return v;
}

long long padicValuation(const Rational& r, std::uint64_t p) {
  if (r == 0) throw DomainError("padicValuation: argument is zero");
  long long v = padicValuation(numerator(r), p);
  if (denominator(r) != 1) v -= padicValuation(denominator(r), p);
  return v;
}

BigInt powBigInt(const BigInt& base, unsigned long exp) {
  BigInt result(1), b = base;
  while (exp) {
    if (exp & 1UL) result *= b;
    exp >>= 1UL;
    if (exp) b *= b;
  }
  return result;
}

BigInt modReduce(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt modInverse(const BigInt& a, const BigInt& m) {
  // Extended Euclid; m > 1.
  BigInt r0 = m, r1 = modReduce(a, m);
  BigInt t0 = 0, t1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    BigInt t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) throw DomainError("modInverse: element is not invertible");
  return modReduce(t0, m);
}

Rational parseRational(const std::string& text) {
  auto bad = [&]() -> Rational {
    throw UsageError("invalid rational literal: '" + text + "'");
  };
  std::string s = text;
  if (s.empty()) return bad();
  std::size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw DomainError("rational with zero denominator: '" + text + "'");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return Rational(num, den);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    return bad();
  }
}

std::string rationalToString(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

}  // namespace venq
