#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "venq/gamma.hpp"
#include "venq/padic.hpp"
#include "venq/qseries.hpp"
#include "venq/rational.hpp"
#include "venq/rng.hpp"

namespace venq {

// Four momenta in Q^d with a diagonal quadratic form; exact rational model.
struct Kinematics {
  std::vector<Rational> metric;  // diagonal coefficients, size d
  std::array<std::vector<Rational>, 4> momenta;
  Rational slope;  // alpha'
};

struct MandelstamSet {
  Rational s, t, u;
};

// Validates mass shell <k_i|k_i> = 2 and conservation sum k_i = 0, then
// returns s = (k1+k2)^2, t = (k1+k3)^2, u = (k1+k4)^2.
MandelstamSet mandelstam(const Kinematics& kin);

Rational innerProduct(const std::vector<Rational>& metric,
                      const std::vector<Rational>& a,
                      const std::vector<Rational>& b);

// alpha(s) = 1 + alpha' s.
Rational alphaOf(const Rational& s, const Rational& slope);
Real alphaOf(const Real& s, const Real& slope);

// Random conserved on-shell configuration in d = 4 (center-of-mass frame,
// rational rotations); every invariant holds exactly.
Kinematics randomOnShellKinematics(Rng& rng);

struct Channel {
  int i, j;  // 1 <= i < j < n
  friend bool operator==(const Channel& a, const Channel& b) {
    return a.i == b.i && a.j == b.j;
  }
};

struct ChannelSet {
  int n = 0;
  std::vector<Channel> channels;  // lexicographic order
  // Index pairs (into channels) whose leg sets intersect without nesting.
  std::vector<std::pair<std::size_t, std::size_t>> overlaps;
};

// The n(n-3)/2 planar channels {i,j}, 1 <= i < j < n, excluding {1, n-1},
// with their overlapping pairs.
ChannelSet channels(int n);

enum class AmplitudeMode {
  ArithmeticP,
  QuantumPQ,
  ClassicalQRatio,
  ClassicalQSum,
  NPoint,
};

std::string modeName(AmplitudeMode mode);

struct AmplitudeResult {
  AmplitudeMode mode;
  std::optional<PadicNumber> padicValue;
  std::optional<Real> scalarValue;
  int verifiedDigits = 0;          // p-adic modes
  std::uint64_t cost = 0;          // p-adic modes: product terms
  std::size_t truncationUsed = 0;  // classical modes
  double achievedTolerance = 0.0;
  std::vector<std::string> resonanceFlags;
};

// Gamma_p(a_s) Gamma_p(a_t) / Gamma_p(a_s + a_t); arguments must lie in Z_p.
AmplitudeResult ampP(const PadicNumber& alphaS, const PadicNumber& alphaT,
                     int targetPrecision, const GammaOptions& opts = {});

// Same ratio built from the q-extended gamma.
AmplitudeResult ampPq(const PadicNumber& alphaS, const PadicNumber& alphaT,
                      const PadicQ& q, int targetPrecision,
                      const GammaOptions& opts = {});

// (1-q)(q;q)_inf (q^(as+at);q)_inf / [(q^as;q)_inf (q^at;q)_inf].
AmplitudeResult ampQRatio(const Real& alphaS, const Real& alphaT,
                          const QReal& q, const TruncationPolicy& policy = {});

// (1-q)(q;q)_inf sum_{m,n} q^(m*as + n*at + mn) / ((q;q)_m (q;q)_n) with the
// level doubled until agreement; requires as, at > 0.
AmplitudeResult ampQDoubleSum(const Real& alphaS, const Real& alphaT,
                              const QReal& q,
                              const TruncationPolicy& policy = {},
                              std::size_t maxLevel = 4096);

// Truncated double sum (no prefactor) over 0 <= m,n <= level, exact.
Rational ampQDoubleSumTruncated(long alphaS, long alphaT, const Rational& q,
                                std::size_t level);

// [(1-q)(q;q)_inf]^(n-3) sum over channel levels 0..L of
// prod_c q^(l_c a_c)/(q;q)_{l_c} * prod_{overlaps} q^(l l'), L doubled from
// initialLevel until agreement, capped at maxLevel. Lexicographic order.
AmplitudeResult ampN(const ChannelSet& cs,
                     const std::map<std::pair<int, int>, Real>& alphas,
                     const QReal& q, const TruncationPolicy& policy = {},
                     std::size_t maxLevel = 64, std::size_t initialLevel = 4);

// Fixed-level nested sum (no prefactor), high-precision scalar.
Real ampNSumFixed(const ChannelSet& cs,
                  const std::map<std::pair<int, int>, Real>& alphas,
                  const QReal& q, std::size_t level);

// Fixed-level nested sum (no prefactor), exact for integer channel exponents.
Rational ampNSumTruncated(const ChannelSet& cs,
                          const std::map<std::pair<int, int>, long>& alphas,
                          const Rational& q, std::size_t level);

struct ResonanceEntry {
  long long alpha;
  bool flagged;
};

// Flags integer channel values alpha <= 0 with p not dividing alpha; a pure
// classifier for the resonance locus.
std::vector<ResonanceEntry> resonanceScan(long long from, long long to,
                                          const Prime& p);

}  // namespace venq
