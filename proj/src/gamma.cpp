#include "venq/gamma.hpp"

#include <cassert>
#include <utility>
#include <vector>

#include "modring64.hpp"

namespace venq {

namespace {

using detail::Mont64;
using detail::u128;
using detail::u64;

struct ProductRun {
  std::vector<BigInt> residues;  // one per checkpoint, mod p^k
  u64 cost = 0;                  // product terms processed
};

void checkCeiling(const BigInt& maxArg, u64 ceiling) {
  if (maxArg > ceiling)
    throw CostLimitError(
        "cost ceiling exceeded: evaluation needs " + maxArg.str() +
            " product terms (ceiling " + std::to_string(ceiling) + ")",
        maxArg > BigInt(UINT64_MAX) ? UINT64_MAX : static_cast<u64>(maxArg),
        ceiling);
}

// prod_{m=1..arg, p∤m} m  (mod p^k) at each checkpoint; args ascending.
ProductRun factorialProducts(const Prime& p, int k,
                             const std::vector<BigInt>& args, u64 ceiling) {
  ProductRun out;
  out.residues.resize(args.size());
  if (args.empty()) return out;
  checkCeiling(args.back(), ceiling);
  const u64 maxArg = static_cast<u64>(args.back());
  out.cost = maxArg;
  const BigInt modBig = powBigInt(BigInt(p.value()), static_cast<unsigned long>(k));

  std::size_t next = 0;
  auto record = [&](u64 m, auto&& current) {
    while (next < args.size() && args[next] == m) {
      out.residues[next] = current();
      ++next;
    }
  };

  if (p.value() == 2 && k <= 62) {
    const u64 mask = (u64(1) << k) - 1;
    u64 prod = 1;
    record(0, [&] { return BigInt(prod); });
    for (u64 m = 1; m <= maxArg; ++m) {
      if (m & 1ULL) prod = static_cast<u64>(u128(prod) * m) & mask;
      record(m, [&] { return BigInt(prod); });
    }
  } else if (modBig < (BigInt(1) << 62)) {
    const Mont64 R(static_cast<u64>(modBig));
    u64 prod = R.r1;
    u64 mMont = 0;
    u64 counter = 0;
    record(0, [&] { return BigInt(R.from(prod)); });
    for (u64 m = 1; m <= maxArg; ++m) {
      mMont = R.add(mMont, R.r1);
      if (++counter == p.value())
        counter = 0;
      else
        prod = R.mul(prod, mMont);
      record(m, [&] { return BigInt(R.from(prod)); });
    }
  } else {
    BigInt prod(1);
    u64 counter = 0;
    record(0, [&] { return prod; });
    for (u64 m = 1; m <= maxArg; ++m) {
      if (++counter == p.value())
        counter = 0;
      else
        prod = prod * m % modBig;
      record(m, [&] { return prod; });
    }
  }
  return out;
}

// prod_{m=1..arg, p∤m} (1-q^m)/(1-q)  (mod p^k); qResidue is q mod p^(k+e),
// e = v_p(q-1). Every factor is a unit: v_p(1-q^m) = e exactly for p∤m.
ProductRun qFactorProducts(const Prime& p, int k, int e, const BigInt& qResidue,
                           const std::vector<BigInt>& args, u64 ceiling) {
  ProductRun out;
  out.residues.resize(args.size());
  if (args.empty()) return out;
  checkCeiling(args.back(), ceiling);
  const u64 maxArg = static_cast<u64>(args.back());
  out.cost = maxArg;
  const int K = k + e;
  const BigInt modBigK = powBigInt(BigInt(p.value()), static_cast<unsigned long>(K));
  const BigInt modBigk = powBigInt(BigInt(p.value()), static_cast<unsigned long>(k));
  const BigInt peBig = powBigInt(BigInt(p.value()), static_cast<unsigned long>(e));

  // (1-q)/p^e, a unit mod p^k; each recorded prefix is divided by its power
  // at the end.
  const BigInt oneMinusQ = modReduce(1 - qResidue, modBigK);
  assert(oneMinusQ % peBig == 0);
  const BigInt wUnit = (oneMinusQ / peBig) % modBigk;

  std::vector<u64> counts(args.size());

  if (p.value() == 2 && K <= 62) {
    const u64 maskK = (u64(1) << K) - 1;
    const u64 maskk = (u64(1) << k) - 1;
    const u64 q = static_cast<u64>(qResidue);
    u64 qm = 1, prod = 1, included = 0;
    std::size_t next = 0;
    auto record = [&](u64 m) {
      while (next < args.size() && args[next] == m) {
        out.residues[next] = BigInt(prod);
        counts[next] = included;
        ++next;
      }
    };
    record(0);
    for (u64 m = 1; m <= maxArg; ++m) {
      qm = static_cast<u64>(u128(qm) * q) & maskK;
      if (m & 1ULL) {
        u64 t = (maskK + 2 - qm) & maskK;  // 1 - q^m mod 2^K
        u64 s = t >> e;
        assert(s & 1ULL);
        prod = static_cast<u64>(u128(prod) * s) & maskk;
        ++included;
      }
      record(m);
    }
    const u64 w = static_cast<u64>(wUnit);
    u64 winv = detail::invOddU64(w) & maskk;
    for (std::size_t i = 0; i < args.size(); ++i) {
      u64 factor = 1;
      u64 base = winv, c = counts[i];
      while (c) {
        if (c & 1ULL) factor = static_cast<u64>(u128(factor) * base) & maskk;
        c >>= 1ULL;
        base = static_cast<u64>(u128(base) * base) & maskk;
      }
      out.residues[i] =
          BigInt(static_cast<u64>(u128(static_cast<u64>(out.residues[i])) * factor) & maskk);
    }
  } else if (modBigK < (BigInt(1) << 62)) {
    const Mont64 RK(static_cast<u64>(modBigK));
    const Mont64 Rk(static_cast<u64>(modBigk));
    const u64 pe = static_cast<u64>(peBig);
    const u64 peInv = detail::invOddU64(pe);
    const u64 qMont = RK.to(static_cast<u64>(qResidue));
    u64 qm = RK.r1, prod = Rk.r1, counter = 0, included = 0;
    std::size_t next = 0;
    auto record = [&](u64 m) {
      while (next < args.size() && args[next] == m) {
        out.residues[next] = BigInt(prod);  // Montgomery form, fixed below
        counts[next] = included;
        ++next;
      }
    };
    record(0);
    for (u64 m = 1; m <= maxArg; ++m) {
      qm = RK.mul(qm, qMont);
      if (++counter == p.value()) {
        counter = 0;
      } else {
        u64 t = RK.sub(RK.r1, qm);  // mont of 1-q^m, divisible by p^e
        u64 s = t * peInv;          // exact division: mont residue mod p^k
        assert(s % p.value() != 0);
        prod = Rk.mul(prod, s);
        ++included;
      }
      record(m);
    }
    const u64 wInvMont = Rk.to(static_cast<u64>(modInverse(wUnit, modBigk)));
    for (std::size_t i = 0; i < args.size(); ++i) {
      u64 v = Rk.mul(static_cast<u64>(out.residues[i]), Rk.pow(wInvMont, counts[i]));
      out.residues[i] = BigInt(Rk.from(v));
    }
  } else {
    BigInt qm(1), prod(1);
    u64 counter = 0, included = 0;
    std::size_t next = 0;
    auto record = [&](u64 m) {
      while (next < args.size() && args[next] == m) {
        out.residues[next] = prod;
        counts[next] = included;
        ++next;
      }
    };
    record(0);
    for (u64 m = 1; m <= maxArg; ++m) {
      qm = qm * qResidue % modBigK;
      if (++counter == p.value()) {
        counter = 0;
      } else {
        BigInt t = modReduce(1 - qm, modBigK);
        assert(t % peBig == 0);
        prod = prod * (t / peBig) % modBigk;
        ++included;
      }
      record(m);
    }
    const BigInt winv = modInverse(wUnit, modBigk);
    for (std::size_t i = 0; i < args.size(); ++i) {
      BigInt factor(1), base = winv;
      u64 c = counts[i];
      while (c) {
        if (c & 1ULL) factor = factor * base % modBigk;
        c >>= 1ULL;
        base = base * base % modBigk;
      }
      out.residues[i] = out.residues[i] * factor % modBigk;
    }
  }

  for (const BigInt& r : out.residues) {
    if (r % p.value() == 0)
      throw DomainError("q-gamma product lost unit-valuedness (internal)");
  }
  return out;
}

// Applies the (-1)^(gammaArg) sign to a product residue P(gammaArg - 1):
// Gamma(n) = (-1)^n * prod_{m<n, p∤m} m.
PadicNumber signedGamma(const Prime& p, int k, const BigInt& gammaArg,
                        const BigInt& productResidue) {
  BigInt pk = powBigInt(BigInt(p.value()), static_cast<unsigned long>(k));
  BigInt r = productResidue % pk;
  if (gammaArg % 2 != 0) r = modReduce(-r, pk);
  return PadicNumber::fromUnit(p, 0, r, k);
}

template <class EvalPair>
GammaValue continuityEval(const PadicNumber& x, int targetPrecision,
                          const GammaOptions& opts, EvalPair&& evalGammaAt) {
  const Prime& p = x.prime();
  if (targetPrecision < 1)
    throw DomainError("gamma: target precision must be >= 1");
  if (x.isZeroClass()) {
    if (x.zeroBound() < 0)
      throw DomainError("gamma: argument must lie in Z_p");
  } else if (x.valuation() < 0) {
    throw DomainError("gamma: argument must lie in Z_p (valuation >= 0); "
                      "no convergent extension to Q_p \\ Z_p is available");
  }

  const long long absAvail = x.absolutePrecision();
  int bestAgreement = 0;
  u64 costTotal = 0;
  for (int g = opts.initialGuardDigits; g <= opts.maxGuardDigits; g *= 2) {
    const int k = targetPrecision + g;
    if (k > absAvail) break;
    BigInt pk = powBigInt(BigInt(p.value()), static_cast<unsigned long>(k));
    BigInt rep = integerRepresentative(x, k);
    BigInt n = rep == 0 ? pk : rep;  // gamma argument, >= 1
    std::vector<BigInt> gammaArgs{n, n + pk};
    auto [values, cost] = evalGammaAt(gammaArgs, k, opts.costCeiling - costTotal);
    costTotal += cost;
    long long d = differenceValuation(values[0], values[1]);
    bestAgreement = std::max(bestAgreement, static_cast<int>(std::min<long long>(d, k)));
    if (d >= targetPrecision) {
      return GammaValue{values[0].truncated(targetPrecision),
                        static_cast<int>(d), n, costTotal};
    }
  }
  throw PrecisionError(
      "gamma: approximants disagree; achieved " +
          std::to_string(bestAgreement) + " of " +
          std::to_string(targetPrecision) + " digits",
      bestAgreement);
}

}  // namespace

PadicNumber gammaPInt(const BigInt& n, const Prime& p, int modulusDigits,
                      const GammaOptions& opts) {
  if (n < 0) throw DomainError("gammaPInt: n must be nonnegative");
  if (modulusDigits < 1) throw DomainError("gammaPInt: need >= 1 digits");
  auto run = factorialProducts(p, modulusDigits, {n}, opts.costCeiling);
  return signedGamma(p, modulusDigits, n + 1, run.residues[0]);
}

BigInt gammaPIntExact(unsigned n, const Prime& p) {
  BigInt prod(1);
  for (unsigned m = 1; m <= n; ++m)
    if (m % p.value() != 0) prod *= m;
  if ((n + 1) % 2 != 0) prod = -prod;
  return prod;
}

GammaValue gammaP(const PadicNumber& x, int targetPrecision,
                  const GammaOptions& opts) {
  const Prime p = x.prime();
  return continuityEval(
      x, targetPrecision, opts,
      [&](const std::vector<BigInt>& gammaArgs, int k, u64 ceiling) {
        std::vector<BigInt> productArgs;
        productArgs.reserve(gammaArgs.size());
        for (const BigInt& a : gammaArgs) productArgs.push_back(a - 1);
        auto run = factorialProducts(p, k, productArgs, ceiling);
        std::vector<PadicNumber> values;
        values.reserve(gammaArgs.size());
        for (std::size_t i = 0; i < gammaArgs.size(); ++i)
          values.push_back(signedGamma(p, k, gammaArgs[i], run.residues[i]));
        return std::pair(std::move(values), run.cost);
      });
}

PadicNumber gammaPqInt(const BigInt& n, const PadicQ& q, int modulusDigits,
                       const GammaOptions& opts) {
  if (n < 0) throw DomainError("gammaPqInt: n must be nonnegative");
  if (modulusDigits < 1) throw DomainError("gammaPqInt: need >= 1 digits");
  const Prime& p = q.prime();
  const int e = q.deltaValuation();
  if (q.number().precision() < modulusDigits + e)
    throw PrecisionError(
        "gammaPqInt: q carries " + std::to_string(q.number().precision()) +
            " digits, need " + std::to_string(modulusDigits + e),
        q.number().precision());
  BigInt modK = powBigInt(BigInt(p.value()),
                          static_cast<unsigned long>(modulusDigits + e));
  BigInt qRes = q.number().unit() % modK;
  auto run = qFactorProducts(p, modulusDigits, e, qRes, {n}, opts.costCeiling);
  return signedGamma(p, modulusDigits, n + 1, run.residues[0]);
}

Rational gammaPqIntRational(unsigned n, const Prime& p, const Rational& q) {
  if (q == 1) throw DomainError("gammaPqIntRational: q = 1");
  Rational prod(1), qm(1);
  const Rational oneMinusQ = 1 - q;
  for (unsigned m = 1; m <= n; ++m) {
    qm *= q;
    if (m % p.value() != 0) prod *= (1 - qm) / oneMinusQ;
  }
  if ((n + 1) % 2 != 0) prod = -prod;
  return prod;
}

GammaValue gammaPq(const PadicNumber& x, const PadicQ& q, int targetPrecision,
                   const GammaOptions& opts) {
  const Prime& p = q.prime();
  if (x.prime() != p) throw DomainError("gammaPq: prime mismatch");
  const int e = q.deltaValuation();
  return continuityEval(
      x, targetPrecision, opts,
      [&](const std::vector<BigInt>& gammaArgs, int k, u64 ceiling) {
        if (q.number().precision() < k + e)
          throw PrecisionError(
              "gammaPq: q carries " + std::to_string(q.number().precision()) +
                  " digits, need " + std::to_string(k + e),
              q.number().precision());
        BigInt modK =
            powBigInt(BigInt(p.value()), static_cast<unsigned long>(k + e));
        BigInt qRes = q.number().unit() % modK;
        std::vector<BigInt> productArgs;
        productArgs.reserve(gammaArgs.size());
        for (const BigInt& a : gammaArgs) productArgs.push_back(a - 1);
        auto run = qFactorProducts(p, k, e, qRes, productArgs, ceiling);
        std::vector<PadicNumber> values;
        values.reserve(gammaArgs.size());
        for (std::size_t i = 0; i < gammaArgs.size(); ++i)
          values.push_back(signedGamma(p, k, gammaArgs[i], run.residues[i]));
        return std::pair(std::move(values), run.cost);
      });
}

}  // namespace venq
