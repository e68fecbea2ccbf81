#include "venq/amplitudes.hpp"

#include <algorithm>
#include <set>

namespace venq {

Rational innerProduct(const std::vector<Rational>& metric,
                      const std::vector<Rational>& a,
                      const std::vector<Rational>& b) {
  if (a.size() != metric.size() || b.size() != metric.size())
    throw KinematicsError("inner product: dimension mismatch", 0);
  Rational s(0);
  for (std::size_t i = 0; i < metric.size(); ++i) s += metric[i] * a[i] * b[i];
  return s;
}

MandelstamSet mandelstam(const Kinematics& kin) {
  const std::size_t d = kin.metric.size();
  if (d == 0) throw KinematicsError("mandelstam: empty metric", 0);
  for (int i = 0; i < 4; ++i) {
    if (kin.momenta[static_cast<std::size_t>(i)].size() != d)
      throw KinematicsError("mandelstam: momentum k" + std::to_string(i + 1) +
                                " has wrong dimension",
                            i + 1);
  }
  for (const Rational& eta : kin.metric)
    if (eta == 0)
      throw KinematicsError("mandelstam: degenerate metric coefficient", 0);
  for (int i = 0; i < 4; ++i) {
    const auto& k = kin.momenta[static_cast<std::size_t>(i)];
    if (innerProduct(kin.metric, k, k) != 2)
      throw KinematicsError(
          "mandelstam: mass-shell violation, <k|k> != 2 for k" +
              std::to_string(i + 1),
          i + 1);
  }
  for (std::size_t c = 0; c < d; ++c) {
    Rational sum(0);
    for (int i = 0; i < 4; ++i) sum += kin.momenta[static_cast<std::size_t>(i)][c];
    if (sum != 0)
      throw KinematicsError("mandelstam: momentum conservation violated", 0);
  }

  auto pairSquare = [&](int a, int b) {
    std::vector<Rational> v(d);
    for (std::size_t c = 0; c < d; ++c)
      v[c] = kin.momenta[static_cast<std::size_t>(a)][c] +
             kin.momenta[static_cast<std::size_t>(b)][c];
    return innerProduct(kin.metric, v, v);
  };
  MandelstamSet ms{pairSquare(0, 1), pairSquare(0, 2), pairSquare(0, 3)};
  // s + t + u = sum <k_i|k_i> holds identically under conservation.
  Rational total(0);
  for (int i = 0; i < 4; ++i) {
    const auto& k = kin.momenta[static_cast<std::size_t>(i)];
    total += innerProduct(kin.metric, k, k);
  }
  if (ms.s + ms.t + ms.u != total)
    throw KinematicsError("mandelstam: s+t+u identity failed (internal)", 0);
  return ms;
}

Rational alphaOf(const Rational& s, const Rational& slope) {
  return 1 + slope * s;
}

Real alphaOf(const Real& s, const Real& slope) { return 1 + slope * s; }

namespace {

// Orthogonal rational rotation of v in coordinate plane (c1, c2) by a
// Pythagorean angle cos = (m^2-n^2)/(m^2+n^2), sin = 2mn/(m^2+n^2).
void rotate(std::vector<Rational>& v, std::size_t c1, std::size_t c2,
            long long m, long long n, bool flip) {
  Rational den(m * m + n * n);
  Rational c = Rational(m * m - n * n) / den;
  Rational s = Rational(2 * m * n) / den;
  if (flip) s = -s;
  Rational a = c * v[c1] - s * v[c2];
  Rational b = s * v[c1] + c * v[c2];
  v[c1] = a;
  v[c2] = b;
}

}  // namespace

Kinematics randomOnShellKinematics(Rng& rng) {
  // Center-of-mass frame: k1 = (E, p), k2 = (E, -p), k3 = (-E, r),
  // k4 = (-E, -r) with |p|^2 = |r|^2 = E^2 + 2; (E, 1, 1) is always on that
  // sphere and rational rotations stay on it.
  Rational E(rng.rangeInt(-9, 9), rng.rangeInt(1, 5));
  auto sample = [&]() {
    std::vector<Rational> v{E, Rational(1), Rational(1)};
    int rounds = static_cast<int>(rng.below(3)) + 1;
    for (int r = 0; r < rounds; ++r) {
      static constexpr std::pair<std::size_t, std::size_t> planes[3] = {
          {0, 1}, {0, 2}, {1, 2}};
      auto [c1, c2] = planes[rng.below(3)];
      long long m = rng.rangeInt(2, 6);
      long long n = rng.rangeInt(1, m - 1);
      rotate(v, c1, c2, m, n, rng.below(2) == 1);
    }
    return v;
  };
  std::vector<Rational> pv = sample(), rv = sample();

  Kinematics kin;
  kin.metric = {Rational(-1), Rational(1), Rational(1), Rational(1)};
  kin.slope = Rational(rng.rangeInt(1, 4), rng.rangeInt(1, 4));
  kin.momenta[0] = {E, pv[0], pv[1], pv[2]};
  kin.momenta[1] = {E, -pv[0], -pv[1], -pv[2]};
  kin.momenta[2] = {-E, rv[0], rv[1], rv[2]};
  kin.momenta[3] = {-E, -rv[0], -rv[1], -rv[2]};
  return kin;
}

ChannelSet channels(int n) {
  if (n < 4) throw DomainError("channels: n must be >= 4");
  ChannelSet cs;
  cs.n = n;
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (i == 1 && j == n - 1) continue;
      cs.channels.push_back(Channel{i, j});
    }
  // Channels are leg intervals {i..j}; a pair overlaps iff the intervals
  // intersect and neither contains the other.
  for (std::size_t a = 0; a < cs.channels.size(); ++a)
    for (std::size_t b = a + 1; b < cs.channels.size(); ++b) {
      const Channel& A = cs.channels[a];
      const Channel& B = cs.channels[b];
      bool intersect = A.i <= B.j && B.i <= A.j;
      bool nested = (A.i <= B.i && B.j <= A.j) || (B.i <= A.i && A.j <= B.j);
      if (intersect && !nested) cs.overlaps.emplace_back(a, b);
    }
  return cs;
}

std::string modeName(AmplitudeMode mode) {
  switch (mode) {
    case AmplitudeMode::ArithmeticP: return "arithmetic_p";
    case AmplitudeMode::QuantumPQ: return "quantum_pq";
    case AmplitudeMode::ClassicalQRatio: return "classical_q_ratio";
    case AmplitudeMode::ClassicalQSum: return "classical_q_sum";
    case AmplitudeMode::NPoint: return "n_point";
  }
  return "unknown";
}

AmplitudeResult ampP(const PadicNumber& alphaS, const PadicNumber& alphaT,
                     int targetPrecision, const GammaOptions& opts) {
  PadicNumber sum = alphaS + alphaT;
  GammaValue gs = gammaP(alphaS, targetPrecision, opts);
  GammaValue gt = gammaP(alphaT, targetPrecision, opts);
  GammaValue gst = gammaP(sum, targetPrecision, opts);
  AmplitudeResult r;
  r.mode = AmplitudeMode::ArithmeticP;
  r.padicValue = gs.value * gt.value / gst.value;
  r.verifiedDigits = std::min({gs.verifiedDigits, gt.verifiedDigits,
                               gst.verifiedDigits});
  r.cost = gs.cost + gt.cost + gst.cost;
  return r;
}

AmplitudeResult ampPq(const PadicNumber& alphaS, const PadicNumber& alphaT,
                      const PadicQ& q, int targetPrecision,
                      const GammaOptions& opts) {
  PadicNumber sum = alphaS + alphaT;
  GammaValue gs = gammaPq(alphaS, q, targetPrecision, opts);
  GammaValue gt = gammaPq(alphaT, q, targetPrecision, opts);
  GammaValue gst = gammaPq(sum, q, targetPrecision, opts);
  AmplitudeResult r;
  r.mode = AmplitudeMode::QuantumPQ;
  r.padicValue = gs.value * gt.value / gst.value;
  r.verifiedDigits = std::min({gs.verifiedDigits, gt.verifiedDigits,
                               gst.verifiedDigits});
  r.cost = gs.cost + gt.cost + gst.cost;
  return r;
}

AmplitudeResult ampQRatio(const Real& alphaS, const Real& alphaT,
                          const QReal& q, const TruncationPolicy& policy) {
  const Real& qq = q.value();
  Real qs = pow(qq, alphaS);
  Real qt = pow(qq, alphaT);
  Real qst = qs * qt;
  TruncationInfo i0, i1, i2, i3;
  Real value = (1 - qq) * qPochhammerInf(qq, q, policy, &i0) *
               qPochhammerInf(qst, q, policy, &i1) /
               (qPochhammerInf(qs, q, policy, &i2) *
                qPochhammerInf(qt, q, policy, &i3));
  AmplitudeResult r;
  r.mode = AmplitudeMode::ClassicalQRatio;
  r.scalarValue = value;
  r.truncationUsed =
      std::max({i0.termsUsed, i1.termsUsed, i2.termsUsed, i3.termsUsed});
  r.achievedTolerance = std::max({i0.achievedTolerance, i1.achievedTolerance,
                                  i2.achievedTolerance, i3.achievedTolerance});
  return r;
}

namespace {

// sum_{m,n=0}^{L} q^(m as + n at + mn) / ((q;q)_m (q;q)_n).
Real doubleSumAtLevel(const Real& qAlphaS, const Real& qAlphaT, const Real& q,
                      std::size_t L) {
  std::vector<Real> A(L + 1), B(L + 1);
  A[0] = 1;
  B[0] = 1;
  Real qm(1);
  for (std::size_t m = 1; m <= L; ++m) {
    qm *= q;  // q^m
    A[m] = A[m - 1] * qAlphaS / (1 - qm);
    B[m] = B[m - 1] * qAlphaT / (1 - qm);
  }
  Real sum(0);
  Real qmPow(1);  // q^m
  for (std::size_t m = 0; m <= L; ++m) {
    Real inner(0), w(1);
    for (std::size_t n = 0; n <= L; ++n) {
      inner += B[n] * w;
      w *= qmPow;  // (q^m)^n
    }
    sum += A[m] * inner;
    qmPow *= q;
  }
  return sum;
}

}  // namespace

AmplitudeResult ampQDoubleSum(const Real& alphaS, const Real& alphaT,
                              const QReal& q, const TruncationPolicy& policy,
                              std::size_t maxLevel) {
  const Real& qq = q.value();
  Real qs = pow(qq, alphaS);
  Real qt = pow(qq, alphaT);
  if (!(qs < 1))
    throw DomainError("double sum diverges: q^alpha(s) >= 1 (need alpha(s) > 0)");
  if (!(qt < 1))
    throw DomainError("double sum diverges: q^alpha(t) >= 1 (need alpha(t) > 0)");

  TruncationInfo ip;
  Real prefactor = (1 - qq) * qPochhammerInf(qq, q, policy, &ip);

  // Adaptive doubling up to maxLevel; the sum at the final level is the
  // answer either way, with the last relative step reported.
  const Real tol = Real(policy.tolerance);
  Real prev(0);
  Real sum(0);
  bool hasPrev = false;
  std::size_t L = std::min<std::size_t>(8, maxLevel);
  double achieved = 0.0;
  while (true) {
    sum = doubleSumAtLevel(qs, qt, qq, L);
    if (hasPrev) {
      Real rel = abs(sum - prev) / abs(sum);
      achieved = static_cast<double>(rel);
      if (rel <= tol || L >= maxLevel) break;
    } else if (L >= maxLevel) {
      break;
    }
    prev = sum;
    hasPrev = true;
    L = std::min(L * 2, maxLevel);
  }
  AmplitudeResult r;
  r.mode = AmplitudeMode::ClassicalQSum;
  r.scalarValue = prefactor * sum;
  r.truncationUsed = L;
  r.achievedTolerance = achieved;
  return r;
}

Rational ampQDoubleSumTruncated(long alphaS, long alphaT, const Rational& q,
                                std::size_t level) {
  if (alphaS <= 0 || alphaT <= 0)
    throw DomainError("exact double sum needs positive integer exponents");
  std::vector<Rational> A(level + 1), B(level + 1);
  A[0] = 1;
  B[0] = 1;
  Rational qs = 1, qt = 1;
  for (long i = 0; i < alphaS; ++i) qs *= q;
  for (long i = 0; i < alphaT; ++i) qt *= q;
  Rational qm(1);
  for (std::size_t m = 1; m <= level; ++m) {
    qm *= q;
    A[m] = A[m - 1] * qs / (1 - qm);
    B[m] = B[m - 1] * qt / (1 - qm);
  }
  Rational sum(0), qmPow(1);
  for (std::size_t m = 0; m <= level; ++m) {
    Rational inner(0), w(1);
    for (std::size_t n = 0; n <= level; ++n) {
      inner += B[n] * w;
      w *= qmPow;
    }
    sum += A[m] * inner;
    qmPow *= q;
  }
  return sum;
}

namespace {

template <class Scalar>
Scalar nestedChannelSum(const ChannelSet& cs, const std::vector<Scalar>& qAlpha,
                        const Scalar& q, std::size_t L) {
  const std::size_t C = cs.channels.size();
  // tables[c][l] = q^(l * alpha_c) / (q;q)_l
  std::vector<std::vector<Scalar>> tables(C);
  std::vector<Scalar> qPoch(L + 1);
  qPoch[0] = Scalar(1);
  {
    Scalar qm(1);
    for (std::size_t l = 1; l <= L; ++l) {
      qm *= q;
      qPoch[l] = qPoch[l - 1] * (Scalar(1) - qm);
    }
  }
  for (std::size_t c = 0; c < C; ++c) {
    tables[c].resize(L + 1);
    tables[c][0] = Scalar(1);
    Scalar pw(1);
    for (std::size_t l = 1; l <= L; ++l) {
      pw *= qAlpha[c];
      tables[c][l] = pw / qPoch[l];
    }
  }
  // Cross powers q^x for x up to L^2 * |overlaps|.
  std::size_t maxCross = L * L * cs.overlaps.size();
  std::vector<Scalar> qPow(maxCross + 1);
  qPow[0] = Scalar(1);
  for (std::size_t x = 1; x <= maxCross; ++x) qPow[x] = qPow[x - 1] * q;

  std::vector<std::size_t> l(C, 0);
  Scalar sum(0);
  while (true) {
    Scalar term = tables[0][l[0]];
    for (std::size_t c = 1; c < C; ++c) term *= tables[c][l[c]];
    std::size_t cross = 0;
    for (const auto& [a, b] : cs.overlaps) cross += l[a] * l[b];
    if (cross > 0) term *= qPow[cross];
    sum += term;
    // lexicographic odometer over channel levels
    std::size_t c = C;
    while (c > 0) {
      --c;
      if (l[c] < L) {
        ++l[c];
        for (std::size_t d = c + 1; d < C; ++d) l[d] = 0;
        break;
      }
      if (c == 0) return sum;
    }
  }
}

std::vector<Real> alphaTableFor(const ChannelSet& cs,
                                const std::map<std::pair<int, int>, Real>& alphas,
                                const Real& q) {
  if (alphas.size() != cs.channels.size())
    throw DomainError("n-point: got " + std::to_string(alphas.size()) +
                      " channel exponents, expected " +
                      std::to_string(cs.channels.size()));
  std::vector<Real> qAlpha;
  qAlpha.reserve(cs.channels.size());
  for (const Channel& ch : cs.channels) {
    auto it = alphas.find({ch.i, ch.j});
    if (it == alphas.end())
      throw DomainError("n-point: missing exponent for channel {" +
                        std::to_string(ch.i) + "," + std::to_string(ch.j) + "}");
    Real qa = pow(q, it->second);
    if (!(qa < 1))
      throw DomainError("n-point sum diverges: q^alpha >= 1 in channel {" +
                        std::to_string(ch.i) + "," + std::to_string(ch.j) + "}");
    qAlpha.push_back(qa);
  }
  return qAlpha;
}

}  // namespace

Real ampNSumFixed(const ChannelSet& cs,
                  const std::map<std::pair<int, int>, Real>& alphas,
                  const QReal& q, std::size_t level) {
  return nestedChannelSum<Real>(cs, alphaTableFor(cs, alphas, q.value()),
                                q.value(), level);
}

Rational ampNSumTruncated(const ChannelSet& cs,
                          const std::map<std::pair<int, int>, long>& alphas,
                          const Rational& q, std::size_t level) {
  if (alphas.size() != cs.channels.size())
    throw DomainError("n-point: channel set mismatch");
  std::vector<Rational> qAlpha;
  for (const Channel& ch : cs.channels) {
    auto it = alphas.find({ch.i, ch.j});
    if (it == alphas.end() || it->second <= 0)
      throw DomainError("n-point exact sum needs positive integer exponents");
    Rational pw(1);
    for (long k = 0; k < it->second; ++k) pw *= q;
    qAlpha.push_back(pw);
  }
  return nestedChannelSum<Rational>(cs, qAlpha, q, level);
}

AmplitudeResult ampN(const ChannelSet& cs,
                     const std::map<std::pair<int, int>, Real>& alphas,
                     const QReal& q, const TruncationPolicy& policy,
                     std::size_t maxLevel, std::size_t initialLevel) {
  const Real& qq = q.value();
  const int extra = cs.n - 3;
  TruncationInfo ip;
  Real prefactor = pow((1 - qq) * qPochhammerInf(qq, q, policy, &ip), extra);

  std::vector<Real> qAlpha = alphaTableFor(cs, alphas, qq);
  const Real tol = Real(policy.tolerance);
  Real prev(0);
  bool hasPrev = false;
  double achieved = 0.0;
  initialLevel = std::max<std::size_t>(1, std::min(initialLevel, maxLevel));
  for (std::size_t L = initialLevel; L <= maxLevel; L *= 2) {
    Real sum = nestedChannelSum<Real>(cs, qAlpha, qq, L);
    if (hasPrev) {
      Real rel = abs(sum - prev) / abs(sum);
      achieved = static_cast<double>(rel);
      if (rel <= tol) {
        AmplitudeResult r;
        r.mode = AmplitudeMode::NPoint;
        r.scalarValue = prefactor * sum;
        r.truncationUsed = L;
        r.achievedTolerance = achieved;
        return r;
      }
    }
    prev = sum;
    hasPrev = true;
  }
  throw TruncationError("n-point sum did not settle by level " +
                            std::to_string(maxLevel),
                        achieved, maxLevel);
}

std::vector<ResonanceEntry> resonanceScan(long long from, long long to,
                                          const Prime& p) {
  std::vector<ResonanceEntry> out;
  const long long pv = static_cast<long long>(p.value());
  for (long long a = from; a <= to; ++a) {
    bool flagged = a <= 0 && (a % pv) != 0;
    out.push_back(ResonanceEntry{a, flagged});
  }
  return out;
}

}  // namespace venq
