#include "doctest.h"

#include "venq/gamma.hpp"
#include "venq/qseries.hpp"
#include "venq/rng.hpp"

#include "oracles.hpp"

using namespace venq;

namespace {

PadicNumber oneAt(const Prime& p, int prec) {
  return PadicNumber::fromInteger(BigInt(1), p, prec);
}

}  // namespace

TEST_CASE("gammaPInt hand values") {
  // Gamma_p(1) = -1: empty product with sign
  for (std::uint64_t pv : {2ULL, 3ULL, 5ULL, 7ULL}) {
    Prime p(pv);
    auto g1 = gammaPInt(BigInt(0), p, 5);
    CHECK(g1 == -oneAt(p, 5));
  }
  // Gamma_7(8) = 720 = 1*2*3*4*5*6 with 7 skipped, sign (+)
  auto g8 = gammaPInt(BigInt(7), Prime(7), 7);
  CHECK(g8 == PadicNumber::fromInteger(BigInt(720), Prime(7), 7));
  CHECK(gammaPIntExact(7, Prime(7)) == 720);
  // Gamma_3(5) = -(1*2*4) = -8
  auto g5 = gammaPInt(BigInt(4), Prime(3), 6);
  CHECK(g5 == PadicNumber::fromInteger(BigInt(-8), Prime(3), 6));
  CHECK(gammaPIntExact(4, Prime(3)) == -8);
}

TEST_CASE("gammaP continuity values") {
  for (std::uint64_t pv : {2ULL, 3ULL, 5ULL, 7ULL}) {
    Prime p(pv);
    auto x1 = PadicNumber::fromInteger(BigInt(1), p, 20);
    auto v1 = gammaP(x1, 5);
    CHECK(v1.value == -oneAt(p, 5));
    CHECK(v1.verifiedDigits >= 5);

    auto x0 = PadicNumber::fromInteger(BigInt(0), p, 20);
    CHECK(gammaP(x0, 5).value == oneAt(p, 5));

    auto xm1 = PadicNumber::fromInteger(BigInt(-1), p, 20);
    CHECK(gammaP(xm1, 5).value == oneAt(p, 5));
  }
}

TEST_CASE("gammaP matches the exact product at integer arguments") {
  // Continuity evaluation must agree with the literal finite product.
  Prime p7(7);
  auto x = PadicNumber::fromInteger(BigInt(8), p7, 20);
  auto v = gammaP(x, 6);
  CHECK(v.value == PadicNumber::fromInteger(BigInt(720), p7, 6));
}

TEST_CASE("recursion of the p-adic gamma, both branches") {
  for (std::uint64_t pv : {3ULL, 5ULL}) {
    Prime p(pv);
    Rng rng(42 + pv);
    const int N = 5;
    for (int iter = 0; iter < 12; ++iter) {
      // unit branch: Gamma(x+1) = -x Gamma(x) for x in Z_p^*
      long long a = rng.rangeInt(1, 100000);
      if (a % pv == 0) ++a;
      auto x = PadicNumber::fromInteger(BigInt(a), p, 24);
      auto gx = gammaP(x, N);
      auto gx1 = gammaP(x + oneAt(p, 24), N);
      CHECK(agreesTo(gx1.value, -(x * gx.value), N));
      CHECK(gx.value.valuation() == 0);  // maps into units

      // pZ_p branch: Gamma(x+1) = -Gamma(x)
      auto y = PadicNumber::fromInteger(BigInt(a * static_cast<long long>(pv)),
                                        p, 24);
      auto gy = gammaP(y, N);
      auto gy1 = gammaP(y + oneAt(p, 24), N);
      CHECK(agreesTo(gy1.value, -gy.value, N));
    }
  }
}

TEST_CASE("continuity witness: arguments close mod p^k give close values") {
  const int N = 6;
  for (std::uint64_t pv : {2ULL, 3ULL, 5ULL}) {
    Prime p(pv);
    Rng rng(pv * 17);
    for (int iter = 0; iter < 8; ++iter) {
      long long base = rng.rangeInt(1, 2000);
      int k = static_cast<int>(rng.rangeInt(2, 5));
      BigInt shift = powBigInt(BigInt(pv), k) * rng.rangeInt(1, 50);
      auto x = PadicNumber::fromInteger(BigInt(base), p, 24);
      auto y = PadicNumber::fromInteger(BigInt(base) + shift, p, 24);
      auto gx = gammaP(x, N);
      auto gy = gammaP(y, N);
      int expect = std::min(N, pv == 2 ? k - 1 : k);
      CHECK(differenceValuation(gx.value, gy.value) >= expect);
    }
  }
}

TEST_CASE("gammaPqInt hand values") {
  Prime p5(5);
  PadicQ q = PadicQ::fromRational(Rational(6), p5, 16);
  // Gamma_{p,q}(1) = -1
  CHECK(gammaPqInt(BigInt(0), q, 8) == -oneAt(p5, 8));
  // n = 2: -(1-q)(1-q^2)/(1-q)^2 = -(1+q)
  auto expected = -(oneAt(p5, 8) +
                    PadicNumber::fromRational(Rational(6), p5, 8));
  CHECK(agreesTo(gammaPqInt(BigInt(2), q, 8), expected, 8));
}

TEST_CASE("gammaPqInt for rational q against the classical q-factorial") {
  // With p bigger than every factor index nothing is skipped and the product
  // is the signed q-factorial; exact rational comparison.
  Rational q(1, 2);
  for (unsigned n = 1; n <= 9; ++n) {
    Prime p(101);
    Rational lhs = gammaPqIntRational(n - 1, p, q);
    Rational rhs = qFactorial(n - 1, q);
    if (n % 2 != 0) rhs = -rhs;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("p to infinity: integer gamma values become signed factorials") {
  for (unsigned n = 1; n <= 8; ++n) {
    for (std::uint64_t pv : {7ULL, 11ULL, 13ULL, 31ULL}) {
      if (pv <= n - 1) continue;
      Prime p(pv);
      BigInt expect(1);
      for (unsigned m = 2; m < n; ++m) expect *= m;
      if (n % 2 != 0) expect = -expect;
      CHECK(gammaPIntExact(n - 1, p) == expect);
    }
  }
}

TEST_CASE("q-deformed gamma approaches the undeformed one as q -> 1") {
  const int N = 6;
  for (std::uint64_t pv : {3ULL, 5ULL}) {
    Prime p(pv);
    auto x = PadicNumber::fromRational(Rational(1, 2), p, 30);
    auto plain = gammaP(x, N);
    long long last = 0;
    for (int k = 1; k <= 6; ++k) {
      Rational qr = 1 + Rational(powBigInt(BigInt(pv), k), 1);
      PadicQ q = PadicQ::fromRational(qr, p, 30);
      auto deformed = gammaPq(x, q, N);
      long long v = differenceValuation(deformed.value, plain.value);
      CHECK(v >= last);
      last = v;
      if (k == 6) CHECK(v >= 3);
    }
  }
}

TEST_CASE("recursion of the q-extended gamma, both branches") {
  for (std::uint64_t pv : {3ULL, 5ULL}) {
    Prime p(pv);
    const int N = 5;
    for (long long c : {1LL, 2LL}) {
      Rational qr = 1 + c * Rational(pv);
      PadicQ q = PadicQ::fromRational(qr, p, 30);
      PadicQ qDeep = PadicQ::fromRational(qr, p, 40);
      Rng rng(1000 * pv + c);
      for (int iter = 0; iter < 8; ++iter) {
        long long a = rng.rangeInt(1, 20000);
        if (a % pv == 0) ++a;
        auto x = PadicNumber::fromInteger(BigInt(a), p, 30);
        auto gx = gammaPq(x, q, N);
        auto gx1 = gammaPq(x + oneAt(p, 30), q, N);
        // factor -(1-q^x)/(1-q) via the binomial-series power
        auto qx = qPower(qDeep, x);
        auto one = oneAt(p, 30);
        auto factor = -((one - qx) / (one - qDeep.number()));
        CHECK(agreesTo(gx1.value, factor * gx.value, N));
        CHECK(gx.value.valuation() == 0);

        auto y = PadicNumber::fromInteger(
            BigInt(a * static_cast<long long>(pv)), p, 30);
        auto gy = gammaPq(y, q, N);
        auto gy1 = gammaPq(y + oneAt(p, 30), q, N);
        CHECK(agreesTo(gy1.value, -gy.value, N));
      }
    }
  }
}

TEST_CASE("gammaPq(1) = -1 for every valid q") {
  for (std::uint64_t pv : {2ULL, 3ULL, 7ULL}) {
    Prime p(pv);
    for (long long k : {1LL, 2LL}) {
      Rational qr = 1 + Rational(powBigInt(BigInt(pv), k), 1);
      PadicQ q = PadicQ::fromRational(qr, p, 24);
      auto x = PadicNumber::fromInteger(BigInt(1), p, 20);
      CHECK(gammaPq(x, q, 6).value == -oneAt(p, 6));
    }
  }
}

TEST_CASE("wide moduli fall back to big-integer kernels") {
  // 5^30 and 5^29 exceed the 64-bit fast path
  Prime p5(5);
  auto viaKernel = gammaPInt(BigInt(12), p5, 30);
  auto viaExact = PadicNumber::fromInteger(gammaPIntExact(12, p5), p5, 30);
  CHECK(viaKernel == viaExact);

  PadicQ q = PadicQ::fromRational(Rational(6), p5, 32);
  auto viaQKernel = gammaPqInt(BigInt(9), q, 28);
  auto viaRational = PadicNumber::fromRational(
      gammaPqIntRational(9, p5, Rational(6)), p5, 28);
  CHECK(viaQKernel == viaRational);
}

TEST_CASE("error paths") {
  Prime p5(5);
  SUBCASE("argument outside Z_p") {
    auto x = PadicNumber::fromRational(BigInt(1), BigInt(5), p5, 10);
    CHECK_THROWS_AS(gammaP(x, 4), DomainError);
  }
  SUBCASE("insufficient argument precision") {
    auto x = PadicNumber::fromInteger(BigInt(12), p5, 3);
    CHECK_THROWS_AS(gammaP(x, 6), PrecisionError);
  }
  SUBCASE("cost ceiling") {
    GammaOptions opts;
    opts.costCeiling = 1000;
    auto x = PadicNumber::fromInteger(BigInt(-1), p5, 20);
    CHECK_THROWS_AS(gammaP(x, 6, opts), CostLimitError);
  }
  SUBCASE("negative product index") {
    CHECK_THROWS_AS(gammaPInt(BigInt(-1), p5, 4), DomainError);
  }
}
