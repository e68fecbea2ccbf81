#include "verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "venq/amplitudes.hpp"
#include "venq/gamma.hpp"
#include "venq/qseries.hpp"
#include "venq/rng.hpp"

namespace venq::verify {

namespace {

PadicNumber oneAt(const Prime& p, int prec) {
  return PadicNumber::fromInteger(BigInt(1), p, prec);
}

GammaOptions gammaOpts(const SuiteConfig& cfg) {
  GammaOptions o;
  o.costCeiling = cfg.costCeiling;
  return o;
}

void suiteRecursions(const SuiteConfig& cfg, const Emit& emit) {
  const int N = cfg.precision;
  for (std::uint64_t pv : cfg.primes) {
    Prime p(pv);
    Rng rng(cfg.seed ^ (pv * 0x9E37ULL));
    GammaOptions opts = gammaOpts(cfg);
    for (int iter = 0; iter < cfg.count; ++iter) {
      bool unitBranch = iter % 2 == 0;
      long long a = rng.rangeInt(1, 20000);
      if (a % static_cast<long long>(pv) == 0) ++a;
      if (!unitBranch) a *= static_cast<long long>(pv);
      auto x = PadicNumber::fromInteger(BigInt(a), p, N + 25);
      auto gx = gammaP(x, N, opts);
      auto gx1 = gammaP(x + oneAt(p, N + 25), N, opts);
      PadicNumber expected = unitBranch ? -(x * gx.value) : -gx.value;
      long long agreement = differenceValuation(gx1.value, expected);
      bool unitValued = gx.value.valuation() == 0;
      bool pass = agreement >= N && unitValued;
      emit(CheckResult{
          unitBranch ? "gamma_p.recursion.unit" : "gamma_p.recursion.pZp",
          Json{{"p", pv}, {"x", a}, {"precision", N}},
          pass,
          "v_p(lhs-rhs)=" + std::to_string(agreement)});
    }

    // q-extended recursion with q = 1 + p
    PadicQ q = PadicQ::fromRational(1 + Rational(pv), p, N + 45);
    for (int iter = 0; iter < cfg.count; ++iter) {
      bool unitBranch = iter % 2 == 0;
      long long a = rng.rangeInt(1, 20000);
      if (a % static_cast<long long>(pv) == 0) ++a;
      if (!unitBranch) a *= static_cast<long long>(pv);
      auto x = PadicNumber::fromInteger(BigInt(a), p, N + 40);
      auto gx = gammaPq(x, q, N, opts);
      auto gx1 = gammaPq(x + oneAt(p, N + 40), q, N, opts);
      PadicNumber expected = [&] {
        if (!unitBranch) return -gx.value;
        auto one = oneAt(p, N + 40);
        auto qx = qPower(q, x);
        return -((one - qx) / (one - q.number())) * gx.value;
      }();
      long long agreement = differenceValuation(gx1.value, expected);
      bool pass = agreement >= N && gx.value.valuation() == 0;
      emit(CheckResult{
          unitBranch ? "gamma_pq.recursion.unit" : "gamma_pq.recursion.pZp",
          Json{{"p", pv}, {"x", a}, {"q", "1+" + std::to_string(pv)},
               {"precision", N}},
          pass,
          "v_p(lhs-rhs)=" + std::to_string(agreement)});
    }
    // Gamma_{p,q}(1) = -1
    auto g1 = gammaPq(oneAt(p, N + 40), q, N, gammaOpts(cfg));
    emit(CheckResult{"gamma_pq.value_at_one",
                     Json{{"p", pv}, {"q", "1+" + std::to_string(pv)}},
                     g1.value == -oneAt(p, N),
                     g1.value.str()});
  }
}

void suiteLimits(const SuiteConfig& cfg, const Emit& emit) {
  const int N = cfg.precision;
  // q -> 1: v_p(Gamma_{p,q_k}(x) - Gamma_p(x)) climbs with k
  for (std::uint64_t pv : cfg.primes) {
    if (pv != 3 && pv != 5) continue;
    Prime p(pv);
    auto x = PadicNumber::fromRational(Rational(1, 2), p, N + 40);
    auto plain = gammaP(x, N, gammaOpts(cfg));
    long long last = 0;
    bool monotone = true;
    for (int k = 1; k <= 5; ++k) {
      PadicQ qk = PadicQ::fromRational(
          1 + Rational(powBigInt(BigInt(pv), k)), p, N + 40);
      auto def = gammaPq(x, qk, N, gammaOpts(cfg));
      long long v = differenceValuation(def.value, plain.value);
      if (v < last) monotone = false;
      last = v;
    }
    emit(CheckResult{"limits.q_to_1.monotone",
                     Json{{"p", pv}, {"x", "1/2"}, {"k_max", 5}},
                     monotone && last >= 3,
                     "final v_p(diff)=" + std::to_string(last)});
  }

  // p -> infinity at integers: Gamma_p(n) = (-1)^n (n-1)!
  bool factorialOk = true;
  for (unsigned n = 1; n <= 8 && factorialOk; ++n) {
    for (std::uint64_t pv : {11ULL, 13ULL, 17ULL, 31ULL}) {
      if (pv <= n - 1) continue;
      BigInt expect(1);
      for (unsigned m = 2; m < n; ++m) expect *= m;
      if (n % 2 != 0) expect = -expect;
      if (gammaPIntExact(n - 1, Prime(pv)) != expect) factorialOk = false;
    }
  }
  emit(CheckResult{"limits.p_to_infinity.factorial",
                   Json{{"n_max", 8}, {"p_max", 31}},
                   factorialOk,
                   factorialOk ? "exact" : "mismatch"});

  // and the q-side at q = 1/2 against the classical q-factorial
  bool qSideOk = true;
  for (unsigned n = 1; n <= 8 && qSideOk; ++n) {
    Rational q(1, 2);
    Rational lhs = gammaPqIntRational(n - 1, Prime(31), q);
    Rational rhs = qFactorial(n - 1, q);
    if (n % 2 != 0) rhs = -rhs;
    if (lhs != rhs) qSideOk = false;
  }
  emit(CheckResult{"limits.p_to_infinity.q_factorial",
                   Json{{"n_max", 8}, {"q", "1/2"}},
                   qSideOk,
                   qSideOk ? "exact" : "mismatch"});

  // restricted-ratio q -> 1 claim at (n, p, z) = (5, 3, 0.4)
  {
    Prime p3(3);
    Real z("0.4");
    Real target = pow(1 - z, Real(-5 + 1));
    Real lastErr(0);
    bool decreasing = true;
    for (int k = 1; k <= 3; ++k) {
      std::size_t budget = 60;
      for (int i = 0; i < k; ++i) budget *= 10;
      Real qk = 1 - pow(Real(10), -k);
      Real v = ratioRestrictedFixed(Real(5), z, QReal(qk), p3, budget);
      Real err = abs(v - target);
      if (k > 1 && !(err < lastErr)) decreasing = false;
      lastErr = err;
    }
    emit(CheckResult{"limits.restricted_ratio.q_to_1",
                     Json{{"n", 5}, {"p", 3}, {"z", "0.4"}, {"k_max", 3}},
                     decreasing,
                     "final |err|=" + lastErr.str(6)});
  }
}

void suiteQBinomial(const SuiteConfig& cfg, const Emit& emit) {
  TruncationPolicy policy;
  policy.tolerance = cfg.tolerance;
  for (const char* alpha : {"0.5", "1.5", "3"})
    for (const char* z : {"0.1", "0.3", "0.6"})
      for (const char* qs : {"0.2", "0.5", "0.8"}) {
        auto r = verifyQBinomial(Real(alpha), Real(z), QReal(Real(qs)), policy);
        bool pass = r.absDiff <= Real("1e-18") * abs(r.lhs);
        emit(CheckResult{"qbinomial.two_sided",
                         Json{{"alpha", alpha}, {"z", z}, {"q", qs}},
                         pass,
                         "|lhs-rhs|=" + r.absDiff.str(6)});
      }
}

void suiteRatio18(const SuiteConfig& cfg, const Emit& emit) {
  TruncationPolicy policy;
  policy.tolerance = cfg.tolerance;
  for (std::uint64_t pv : {2ULL, 3ULL, 5ULL})
    for (const char* qs : {"0.3", "0.7"})
      for (const char* zs : {"0.2", "0.5"})
        for (const char* as : {"0.5", "2"}) {
          auto r = verifyRatioIdentity(Real(as), Real(zs), QReal(Real(qs)),
                                       Prime(pv), policy);
          bool pass = r.absDiff <= Real("1e-15") * std::max(abs(r.lhs), Real(1));
          emit(CheckResult{"ratio18.two_sided",
                           Json{{"p", pv}, {"q", qs}, {"z", zs}, {"alpha", as}},
                           pass,
                           "|lhs-rhs|=" + r.absDiff.str(6)});
        }

  // exact finite recombination: (a;q)_{p,n} (q^(p-1)a; q^p)_{nu} = (a;q)_n
  Rng rng(cfg.seed ^ 0x1812ULL);
  bool exactOk = true;
  for (std::uint64_t pv : {2ULL, 3ULL, 5ULL}) {
    Prime p(pv);
    for (unsigned n = 0; n <= 30; n += 5) {
      Rational a(rng.rangeInt(-4, 4), rng.rangeInt(1, 6));
      Rational q(rng.rangeInt(1, 5), rng.rangeInt(6, 9));
      Rational qp(1), qp1(1);
      for (std::uint64_t i = 0; i < pv; ++i) qp *= q;
      for (std::uint64_t i = 0; i + 1 < pv; ++i) qp1 *= q;
      if (qPochhammerP(a, q, n, p) * qPochhammer(qp1 * a, qp, nuP(n, p)) !=
          qPochhammer(a, q, n))
        exactOk = false;
    }
  }
  emit(CheckResult{"ratio18.finite_recombination",
                   Json{{"n_max", 30}},
                   exactOk,
                   exactOk ? "exact" : "mismatch"});
}

void suiteNPoint(const SuiteConfig&, const Emit& emit) {
  // channel counts against the set-theoretic definition
  bool countsOk = true, overlapsOk = true;
  for (int n = 4; n <= 10; ++n) {
    ChannelSet cs = channels(n);
    if (cs.channels.size() != static_cast<std::size_t>(n * (n - 3) / 2))
      countsOk = false;
    for (auto [a, b] : cs.overlaps) {
      const Channel &A = cs.channels[a], &B = cs.channels[b];
      bool intersect = A.i <= B.j && B.i <= A.j;
      bool nested = (A.i <= B.i && B.j <= A.j) || (B.i <= A.i && A.j <= B.j);
      if (!(intersect && !nested)) overlapsOk = false;
    }
  }
  emit(CheckResult{"npoint.channel_count", Json{{"n_max", 10}}, countsOk,
                   countsOk ? "n(n-3)/2" : "mismatch"});
  emit(CheckResult{"npoint.overlap_definition", Json{{"n_max", 10}},
                   overlapsOk, overlapsOk ? "consistent" : "mismatch"});

  // n = 4 reduces to the double sum exactly (rational q)
  {
    ChannelSet cs = channels(4);
    Rational q(2, 5);
    std::map<std::pair<int, int>, long> alphas{{{1, 2}, 2}, {{2, 3}, 3}};
    bool equal = true;
    for (std::size_t L = 0; L <= 8; ++L)
      if (ampNSumTruncated(cs, alphas, q, L) !=
          ampQDoubleSumTruncated(2, 3, q, L))
        equal = false;
    emit(CheckResult{"npoint.reduction_to_4pt",
                     Json{{"q", "2/5"}, {"L_max", 8}}, equal,
                     equal ? "exact at every level" : "mismatch"});
  }

  // n = 5 stability under level doubling
  {
    ChannelSet cs = channels(5);
    QReal q(Real("0.2"));
    std::map<std::pair<int, int>, Real> alphas;
    for (const Channel& ch : cs.channels) alphas[{ch.i, ch.j}] = Real(2);
    Real s6 = ampNSumFixed(cs, alphas, q, 6);
    Real s12 = ampNSumFixed(cs, alphas, q, 12);
    Real rel = abs(s12 - s6) / abs(s12);
    emit(CheckResult{"npoint.level_stability",
                     Json{{"n", 5}, {"q", "0.2"}, {"levels", "6 vs 12"}},
                     rel <= Real("1e-8"),
                     "rel=" + rel.str(6)});
  }

  // classical dual forms on a small grid
  for (const char* a : {"1", "2.5"})
    for (const char* qs : {"0.3", "0.6"}) {
      QReal q{Real(qs)};
      auto ratio = ampQRatio(Real(a), Real(a), q);
      auto dsum = ampQDoubleSum(Real(a), Real(a), q);
      Real rel = abs(*ratio.scalarValue - *dsum.scalarValue) /
                 abs(*ratio.scalarValue);
      emit(CheckResult{"npoint.dual_forms",
                       Json{{"alpha", a}, {"q", qs}},
                       rel <= Real("1e-12"),
                       "rel=" + rel.str(6)});
    }
}

void suiteKinematics(const SuiteConfig& cfg, const Emit& emit) {
  Rng rng(cfg.seed ^ 0xCAFEULL);
  int failures = 0;
  const int trials = std::max(cfg.count * 5, 50);
  for (int iter = 0; iter < trials; ++iter) {
    Kinematics kin = randomOnShellKinematics(rng);
    MandelstamSet ms = mandelstam(kin);
    if (ms.s + ms.t + ms.u != 8) ++failures;
  }
  emit(CheckResult{"kinematics.stu_identity",
                   Json{{"trials", trials}, {"d", 4}},
                   failures == 0,
                   std::to_string(trials - failures) + "/" +
                       std::to_string(trials) + " exact"});

  bool alphaOk = alphaOf(Rational(0), Rational(1)) == 1 &&
                 alphaOf(Rational(8), Rational(1, 2)) == 5;
  emit(CheckResult{"kinematics.alpha_linear", Json::object(), alphaOk,
                   alphaOk ? "exact" : "mismatch"});
}

}  // namespace

std::vector<std::string> suiteNames() {
  return {"recursions", "limits", "qbinomial", "ratio18",
          "npoint",     "kinematics", "all"};
}

bool runSuite(const std::string& name, const SuiteConfig& cfg,
              const Emit& emit) {
  if (name == "recursions") {
    suiteRecursions(cfg, emit);
  } else if (name == "limits") {
    suiteLimits(cfg, emit);
  } else if (name == "qbinomial") {
    suiteQBinomial(cfg, emit);
  } else if (name == "ratio18") {
    suiteRatio18(cfg, emit);
  } else if (name == "npoint") {
    suiteNPoint(cfg, emit);
  } else if (name == "kinematics") {
    suiteKinematics(cfg, emit);
  } else if (name == "all") {
    suiteRecursions(cfg, emit);
    suiteLimits(cfg, emit);
    suiteQBinomial(cfg, emit);
    suiteRatio18(cfg, emit);
    suiteNPoint(cfg, emit);
    suiteKinematics(cfg, emit);
  } else {
    return false;
  }
  return true;
}

}  // namespace venq::verify
