#pragma once

#include <map>
#include <string>
#include <utility>

#include "json.hpp"
#include "venq/amplitudes.hpp"
#include "venq/padic.hpp"
#include "venq/qseries.hpp"

namespace venq {

// ordered_json keeps key order stable so seeded runs are byte-identical.
using Json = nlohmann::ordered_json;

inline std::string realToString(const Real& v) {
  return v.str(32, std::ios_base::scientific);
}

inline Json toJson(const PadicNumber& x) {
  Json j;
  j["p"] = x.prime().value();
  j["valuation"] = x.isZeroClass() ? x.zeroBound() : x.valuation();
  j["digits"] = x.digits();
  j["precision"] = x.precision();
  return j;
}

inline Json toJson(const TwoSidedReport& r) {
  Json j;
  j["lhs"] = realToString(r.lhs);
  j["rhs"] = realToString(r.rhs);
  j["abs_diff"] = realToString(r.absDiff);
  j["truncation_used"] = r.truncationUsed;
  j["tolerance_met"] = r.toleranceMet;
  return j;
}

inline Json toJson(const AmplitudeResult& r) {
  Json j;
  j["mode"] = modeName(r.mode);
  if (r.padicValue) {
    j["value"] = toJson(*r.padicValue);
    j["canonical"] = r.padicValue->str();
    j["verified_digits"] = r.verifiedDigits;
    j["cost"] = r.cost;
  }
  if (r.scalarValue) {
    j["value"] = realToString(*r.scalarValue);
    j["truncation_used"] = r.truncationUsed;
    j["achieved_tolerance"] = r.achievedTolerance;
  }
  j["resonance_flags"] = r.resonanceFlags;
  return j;
}

inline Rational rationalFromJson(const Json& j, const std::string& what) {
  if (j.is_string()) return parseRational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw UsageError(what + ": expected integer or rational string");
}

inline Real realFromJson(const Json& j, const std::string& what) {
  if (j.is_string()) return Real(j.get<std::string>());
  if (j.is_number_integer()) return Real(j.get<long long>());
  if (j.is_number_float()) return Real(j.dump());
  throw UsageError(what + ": expected a number or numeric string");
}

inline Kinematics kinematicsFromJson(const Json& j) {
  Kinematics kin;
  if (!j.contains("metric") || !j.contains("momenta") || !j.contains("slope"))
    throw UsageError("kinematics JSON needs {metric, momenta, slope}");
  for (const auto& e : j.at("metric"))
    kin.metric.push_back(rationalFromJson(e, "metric"));
  const auto& mom = j.at("momenta");
  if (!mom.is_array() || mom.size() != 4)
    throw UsageError("kinematics JSON: momenta must hold exactly 4 vectors");
  for (std::size_t i = 0; i < 4; ++i)
    for (const auto& e : mom.at(i))
      kin.momenta[i].push_back(rationalFromJson(e, "momenta"));
  kin.slope = rationalFromJson(j.at("slope"), "slope");
  return kin;
}

struct NPointInput {
  int n = 0;
  std::map<std::pair<int, int>, Real> alphas;
  QReal q;
  std::size_t maxLevel = 0;
};

inline NPointInput npointFromJson(const Json& j) {
  if (!j.contains("n") || !j.contains("alphas") || !j.contains("q") ||
      !j.contains("max_level"))
    throw UsageError("n-point JSON needs {n, alphas, q, max_level}");
  int n = j.at("n").get<int>();
  std::map<std::pair<int, int>, Real> alphas;
  for (const auto& [key, value] : j.at("alphas").items()) {
    auto comma = key.find(',');
    if (comma == std::string::npos)
      throw UsageError("n-point JSON: channel keys look like \"i,j\"");
    int i = std::stoi(key.substr(0, comma));
    int jj = std::stoi(key.substr(comma + 1));
    alphas[{i, jj}] = realFromJson(value, "alphas[" + key + "]");
  }
  QReal q(realFromJson(j.at("q"), "q"));
  std::size_t maxLevel = j.at("max_level").get<std::size_t>();
  return NPointInput{n, std::move(alphas), q, maxLevel};
}

}  // namespace venq
