#include "venq/padic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace venq {

namespace {

std::uint64_t mulmodU64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmodU64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1ULL) r = mulmodU64(r, a, m);
    a = mulmodU64(a, a, m);
    e >>= 1ULL;
  }
  return r;
}

}  // namespace

bool isPrimeU64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL,
                              19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1ULL) == 0) {
    d >>= 1ULL;
    ++s;
  }
  // Deterministic for all 64-bit inputs with this base set.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmodU64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmodU64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Prime::Prime(std::uint64_t value) : value_(value) {
  if (!isPrimeU64(value))
    throw DomainError("Prime: " + std::to_string(value) + " is not prime");
}

// ---------------------------------------------------------------------------
// PadicNumber
// ---------------------------------------------------------------------------

PadicNumber PadicNumber::zeroClass(const Prime& p, long long bound) {
  return PadicNumber(p, bound, BigInt(0), 0, true);
}

PadicNumber PadicNumber::fromUnit(const Prime& p, long long valuation,
                                  const BigInt& unit, int precision) {
  if (precision < 1) throw DomainError("PadicNumber: precision must be >= 1");
  BigInt pk = powBigInt(BigInt(p.value()), static_cast<unsigned long>(precision));
  BigInt u = modReduce(unit, pk);
  if (u == 0 || u % p.value() == 0)
    throw DomainError("PadicNumber: unit part is divisible by p");
  return PadicNumber(p, valuation, std::move(u), precision, false);
}

PadicNumber PadicNumber::fromResidue(const Prime& p, long long valuation,
                                     const BigInt& residue, int digits) {
  if (digits < 1) throw DomainError("PadicNumber: digit count must be >= 1");
  BigInt pk = powBigInt(BigInt(p.value()), static_cast<unsigned long>(digits));
  BigInt r = modReduce(residue, pk);
  if (r == 0) return zeroClass(p, valuation + digits);
  long long j = padicValuation(r, p.value());
  if (j > 0) r /= powBigInt(BigInt(p.value()), static_cast<unsigned long>(j));
  return PadicNumber(p, valuation + j, std::move(r),
                     digits - static_cast<int>(j), false);
}

PadicNumber PadicNumber::fromInteger(const BigInt& n, const Prime& p,
                                     int precision) {
  if (precision < 1) throw DomainError("PadicNumber: precision must be >= 1");
  if (n == 0) return zeroClass(p, precision);
  long long v = padicValuation(n, p.value());
  BigInt u = n / powBigInt(BigInt(p.value()), static_cast<unsigned long>(v));
  BigInt pk = powBigInt(BigInt(p.value()), static_cast<unsigned long>(precision));
  return PadicNumber(p, v, modReduce(u, pk), precision, false);
}

PadicNumber PadicNumber::fromRational(const BigInt& a, const BigInt& b,
                                      const Prime& p, int precision) {
  if (b == 0) throw DomainError("fromRational: zero denominator");
  if (precision < 1) throw DomainError("PadicNumber: precision must be >= 1");
  if (a == 0) return zeroClass(p, precision);
  long long va = padicValuation(a, p.value());
  long long vb = padicValuation(b, p.value());
  BigInt pa = powBigInt(BigInt(p.value()), static_cast<unsigned long>(va));
  BigInt pb = powBigInt(BigInt(p.value()), static_cast<unsigned long>(vb));
  BigInt ua = a / pa;
  BigInt ub = b / pb;
  BigInt pk = powBigInt(BigInt(p.value()), static_cast<unsigned long>(precision));
  BigInt u = modReduce(modReduce(ua, pk) * modInverse(ub, pk), pk);
  return PadicNumber(p, va - vb, std::move(u), precision, false);
}

PadicNumber PadicNumber::fromRational(const Rational& r, const Prime& p,
                                      int precision) {
  return fromRational(numerator(r), denominator(r), p, precision);
}

long long PadicNumber::valuation() const {
  if (zero_)
    throw PrecisionError("valuation of a zero-class value is only bounded",
                         0);
  return val_;
}

long long PadicNumber::zeroBound() const {
  if (!zero_) throw DomainError("zeroBound: value is not a zero class");
  return val_;
}

const BigInt& PadicNumber::unit() const {
  if (zero_) throw PrecisionError("zero-class value has no unit part", 0);
  return unit_;
}

std::vector<std::uint32_t> PadicNumber::digits() const {
  std::vector<std::uint32_t> out;
  if (zero_) return out;
  BigInt u = unit_;
  const std::uint64_t p = p_.value();
  for (int i = 0; i < prec_; ++i) {
    out.push_back(static_cast<std::uint32_t>(u % p));
    u /= p;
  }
  return out;
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  BigInt pk = powBigInt(BigInt(p_.value()), static_cast<unsigned long>(prec_));
  return PadicNumber(p_, val_, pk - unit_, prec_, false);
}

namespace {

void requireSamePrime(const PadicNumber& a, const PadicNumber& b) {
  if (a.prime() != b.prime())
    throw DomainError("mixed primes in p-adic arithmetic");
}

PadicNumber addImpl(const PadicNumber& a, const PadicNumber& b, bool subtract) {
  requireSamePrime(a, b);
  const Prime& p = a.prime();
  if (a.isZeroClass() && b.isZeroClass())
    return PadicNumber::zeroClass(p, std::min(a.zeroBound(), b.zeroBound()));
  if (a.isZeroClass() || b.isZeroClass()) {
    const PadicNumber& x = a.isZeroClass() ? b : a;
    long long bound = a.isZeroClass() ? a.zeroBound() : b.zeroBound();
    bool negate = subtract && a.isZeroClass();
    long long absPrec = std::min(x.absolutePrecision(), bound);
    if (absPrec <= x.valuation()) return PadicNumber::zeroClass(p, absPrec);
    PadicNumber t = x.truncated(static_cast<int>(absPrec - x.valuation()));
    return negate ? -t : t;
  }
  long long v = std::min(a.valuation(), b.valuation());
  long long absPrec = std::min(a.absolutePrecision(), b.absolutePrecision());
  int avail = static_cast<int>(absPrec - v);
  BigInt pk = powBigInt(BigInt(p.value()), static_cast<unsigned long>(avail));
  BigInt ta = a.unit() * powBigInt(BigInt(p.value()),
                                   static_cast<unsigned long>(a.valuation() - v));
  BigInt tb = b.unit() * powBigInt(BigInt(p.value()),
                                   static_cast<unsigned long>(b.valuation() - v));
  BigInt s = subtract ? BigInt(ta - tb) : BigInt(ta + tb);
  return PadicNumber::fromResidue(p, v, s, avail);
}

}  // namespace

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  return addImpl(a, b, false);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) {
  return addImpl(a, b, true);
}

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  requireSamePrime(a, b);
  const Prime& p = a.prime();
  if (a.isZeroClass() && b.isZeroClass())
    return PadicNumber::zeroClass(p, a.zeroBound() + b.zeroBound());
  if (a.isZeroClass() || b.isZeroClass()) {
    const PadicNumber& x = a.isZeroClass() ? b : a;
    long long bound = a.isZeroClass() ? a.zeroBound() : b.zeroBound();
    return PadicNumber::zeroClass(p, bound + x.valuation());
  }
  int prec = std::min(a.precision(), b.precision());
  BigInt pk = powBigInt(BigInt(p.value()), static_cast<unsigned long>(prec));
  return PadicNumber::fromUnit(p, a.valuation() + b.valuation(),
                               modReduce(a.unit() * b.unit(), pk), prec);
}

PadicNumber PadicNumber::inverse() const {
  if (zero_) throw DomainError("inverse of a zero-class value");
  BigInt pk = powBigInt(BigInt(p_.value()), static_cast<unsigned long>(prec_));
  return PadicNumber(p_, -val_, modInverse(unit_, pk), prec_, false);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
  requireSamePrime(a, b);
  if (b.isZeroClass()) throw DomainError("division by a zero-class value");
  if (a.isZeroClass())
    return PadicNumber::zeroClass(a.prime(), a.zeroBound() - b.valuation());
  int prec = std::min(a.precision(), b.precision());
  BigInt pk = powBigInt(BigInt(a.prime().value()),
                        static_cast<unsigned long>(prec));
  BigInt u = modReduce(modReduce(a.unit(), pk) * modInverse(b.unit(), pk), pk);
  return PadicNumber::fromUnit(a.prime(), a.valuation() - b.valuation(), u,
                               prec);
}

PadicNumber PadicNumber::pow(long long exponent) const {
  if (exponent == 0) {
    int prec = zero_ ? std::max<long long>(1, val_) : prec_;
    return fromUnit(p_, 0, BigInt(1), static_cast<int>(prec));
  }
  if (zero_) {
    if (exponent < 0) throw DomainError("negative power of a zero-class value");
    return zeroClass(p_, val_ * exponent);
  }
  PadicNumber base = exponent < 0 ? inverse() : *this;
  unsigned long long e = exponent < 0
                             ? static_cast<unsigned long long>(-(exponent + 1)) + 1ULL
                             : static_cast<unsigned long long>(exponent);
  PadicNumber acc = fromUnit(p_, 0, BigInt(1), base.precision());
  while (e) {
    if (e & 1ULL) acc = acc * base;
    e >>= 1ULL;
    if (e) base = base * base;
  }
  return acc;
}

PadicNumber PadicNumber::truncated(int digits) const {
  if (zero_) {
    return *this;
  }
  if (digits < 1) throw DomainError("truncated: digit count must be >= 1");
  if (digits >= prec_) return *this;
  BigInt pk = powBigInt(BigInt(p_.value()), static_cast<unsigned long>(digits));
  return PadicNumber(p_, val_, unit_ % pk, digits, false);
}

bool operator==(const PadicNumber& a, const PadicNumber& b) {
  return a.p_ == b.p_ && a.zero_ == b.zero_ && a.val_ == b.val_ &&
         a.prec_ == b.prec_ && a.unit_ == b.unit_;
}

long long differenceValuation(const PadicNumber& a, const PadicNumber& b) {
  PadicNumber d = a - b;
  return d.isZeroClass() ? d.zeroBound() : d.valuation();
}

bool agreesTo(const PadicNumber& a, const PadicNumber& b, int k) {
  requireSamePrime(a, b);
  long long common;
  if (a.isZeroClass() && b.isZeroClass()) return true;
  if (a.isZeroClass())
    common = std::min(a.zeroBound(), b.valuation());
  else if (b.isZeroClass())
    common = std::min(a.valuation(), b.zeroBound());
  else
    common = std::min(a.valuation(), b.valuation());
  return differenceValuation(a, b) >= common + k;
}

std::string PadicNumber::str() const {
  std::ostringstream os;
  const std::uint64_t p = p_.value();
  if (zero_) {
    os << "O(" << p << "^(" << val_ << "))";
    return os.str();
  }
  os << p << "^" << val_ << " * (";
  auto d = digits();
  for (int i = 0; i < prec_; ++i) {
    if (i > 0) os << " + ";
    if (i == 0)
      os << d[static_cast<std::size_t>(i)];
    else if (i == 1)
      os << d[static_cast<std::size_t>(i)] << "*" << p;
    else
      os << d[static_cast<std::size_t>(i)] << "*" << p << "^" << i;
  }
  os << ") + O(" << p << "^(" << (val_ + prec_) << "))";
  return os.str();
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  void skipWs() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool consume(const std::string& tok) {
    skipWs();
    if (s.compare(i, tok.size(), tok) == 0) {
      i += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!consume(tok))
      throw UsageError("p-adic parse error near position " + std::to_string(i));
  }
  long long integer() {
    skipWs();
    std::size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw UsageError("p-adic parse error: integer expected");
    return std::stoll(s.substr(start, i - start));
  }
};

}  // namespace

PadicNumber PadicNumber::parse(const std::string& text) {
  Cursor c{text};
  c.skipWs();
  if (c.consume("O(")) {
    long long p = c.integer();
    c.expect("^");
    c.expect("(");
    long long bound = c.integer();
    c.expect(")");
    c.expect(")");
    return zeroClass(Prime(static_cast<std::uint64_t>(p)), bound);
  }
  long long pval = c.integer();
  Prime p(static_cast<std::uint64_t>(pval));
  c.expect("^");
  long long v = c.integer();
  c.expect("*");
  c.expect("(");
  std::vector<long long> digits;
  while (true) {
    long long d = c.integer();
    if (c.consume("*")) {
      long long base = c.integer();
      if (base != pval) throw UsageError("p-adic parse error: base mismatch");
      if (c.consume("^")) {
        long long e = c.integer();
        if (e != static_cast<long long>(digits.size()))
          throw UsageError("p-adic parse error: exponent out of order");
      } else if (digits.size() != 1) {
        throw UsageError("p-adic parse error: exponent out of order");
      }
    }
    digits.push_back(d);
    if (c.consume(")")) break;
    c.expect("+");
  }
  c.expect("+");
  c.expect("O(");
  {
    long long base = c.integer();
    if (base != pval) throw UsageError("p-adic parse error: base mismatch");
  }
  c.expect("^");
  c.expect("(");
  long long bound = c.integer();
  c.expect(")");
  c.expect(")");
  if (bound != v + static_cast<long long>(digits.size()))
    throw UsageError("p-adic parse error: precision mismatch");
  BigInt unit = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] < 0 || static_cast<std::uint64_t>(digits[i]) >= p.value())
      throw UsageError("p-adic parse error: digit out of range");
    unit = unit * p.value() + digits[i];
  }
  return fromUnit(p, v, unit, static_cast<int>(digits.size()));
}

BigInt integerRepresentative(const PadicNumber& x, int k) {
  if (k < 1) throw DomainError("integerRepresentative: k must be >= 1");
  if (x.isZeroClass()) {
    if (x.zeroBound() < 0)
      throw DomainError("integerRepresentative: value may lie outside Z_p");
    if (k > x.zeroBound())
      throw PrecisionError("integerRepresentative: zero class known only to "
                           "O(p^" + std::to_string(x.zeroBound()) + ")",
                           static_cast<int>(x.zeroBound()));
    return BigInt(0);
  }
  if (x.valuation() < 0)
    throw DomainError("integerRepresentative: negative valuation");
  if (k > x.absolutePrecision())
    throw PrecisionError(
        "integerRepresentative: requested " + std::to_string(k) +
            " digits, argument known to " +
            std::to_string(x.absolutePrecision()),
        static_cast<int>(x.absolutePrecision()));
  if (x.valuation() >= k) return BigInt(0);
  unsigned long rem = static_cast<unsigned long>(k - x.valuation());
  BigInt pk = powBigInt(BigInt(x.prime().value()), rem);
  return (x.unit() % pk) *
         powBigInt(BigInt(x.prime().value()),
                   static_cast<unsigned long>(x.valuation()));
}

// ---------------------------------------------------------------------------
// PadicQ and q^x
// ---------------------------------------------------------------------------

PadicQ::PadicQ(const PadicNumber& q) : q_(q), delta_val_(0) {
  if (q.isZeroClass() || q.valuation() != 0)
    throw DomainError("PadicQ: q must be a p-adic unit");
  PadicNumber one = PadicNumber::fromUnit(q.prime(), 0, BigInt(1),
                                          q.precision());
  PadicNumber h = q - one;
  if (h.isZeroClass())
    throw DomainError("PadicQ: q = 1 to working precision (|q-1|_p = 0)");
  if (h.valuation() < 1)
    throw DomainError("PadicQ: |q-1|_p must be < 1 (v_p(q-1) >= 1)");
  delta_val_ = static_cast<int>(h.valuation());
}

PadicQ PadicQ::fromRational(const Rational& r, const Prime& p, int precision) {
  return PadicQ(PadicNumber::fromRational(r, p, precision));
}

PadicNumber qPower(const PadicQ& q, const PadicNumber& x) {
  const Prime& p = q.prime();
  if (x.prime() != p) throw DomainError("qPower: prime mismatch");
  if (!x.isZeroClass() && x.valuation() < 0)
    throw DomainError("qPower: exponent must lie in Z_p");
  if (x.isZeroClass() && x.zeroBound() < 0)
    throw DomainError("qPower: exponent must lie in Z_p");

  const int e = q.deltaValuation();
  const int qprec = q.number().precision();
  PadicNumber one = PadicNumber::fromUnit(p, 0, BigInt(1), qprec);
  PadicNumber h = q.number() - one;  // valuation e >= 1

  PadicNumber sum = one;
  PadicNumber coeff = one;  // C(x, n)
  PadicNumber hpow = one;   // (q-1)^n
  long long xAbs = x.absolutePrecision();
  const long long maxTerms =
      16 + (static_cast<long long>(qprec) + e) / e * 4;
  for (long long n = 1; n <= maxTerms; ++n) {
    // Stop once every further term is beyond the known precision of the sum.
    long long sumAbs = sum.absolutePrecision();
    if (static_cast<long long>(n) * e >= sumAbs) break;
    PadicNumber nm1 =
        PadicNumber::fromInteger(BigInt(n - 1), p, static_cast<int>(std::max<long long>(1, xAbs)));
    PadicNumber num = x - nm1;
    PadicNumber den = PadicNumber::fromInteger(BigInt(n), p, qprec);
    coeff = coeff * num / den;
    hpow = hpow * h;
    sum = sum + coeff * hpow;
  }
  return sum;
}

}  // namespace venq
