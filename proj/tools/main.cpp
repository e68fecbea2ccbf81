#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "venq/amplitudes.hpp"
#include "venq/gamma.hpp"
#include "venq/json_io.hpp"
#include "venq/qseries.hpp"
#include "verify_suites.hpp"

using namespace venq;

namespace {

// Exit codes: 0 success, 1 domain error, 2 precision/truncation failure,
// 3 usage error. Errors print exactly one machine-parsable line on stderr.
[[noreturn]] void fail(int code, const std::string& cls,
                       const std::string& message) {
  Json j;
  j["error"]["class"] = cls;
  j["error"]["message"] = message;
  std::cerr << j.dump() << "\n";
  std::exit(code);
}

// A JSON config file mirrors long flags: {"prec": 8, "json": true}. Values
// already given on the command line win.
std::vector<std::string> expandConfig(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string configPath;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      configPath = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      configPath = args[i].substr(9);
  }
  if (configPath.empty()) return args;
  std::ifstream in(configPath);
  if (!in) throw UsageError("cannot open config file: " + configPath);
  Json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") continue;
    std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag + "=" + value.get<std::string>());
    } else {
      args.push_back(flag + "=" + value.dump());
    }
  }
  return args;
}

// Trimmed human-readable rendering: the high-precision engine carries ~50
// digits of which the last few are roundoff noise.
std::string realDisplay(const Real& v) {
  std::string s = v.str(static_cast<std::streamsize>(classicalDigits()) - 8);
  if (s.find('.') != std::string::npos && s.find('e') == std::string::npos) {
    std::size_t last = s.find_last_not_of('0');
    if (s[last] == '.') --last;
    s.erase(last + 1);
  }
  return s;
}

Real realFromText(const std::string& s) {
  if (s.find('/') != std::string::npos) {
    Rational r = parseRational(s);
    return Real(numerator(r).str()) / Real(denominator(r).str());
  }
  try {
    return Real(s);
  } catch (const std::exception&) {
    throw UsageError("invalid numeric literal: '" + s + "'");
  }
}

struct Output {
  std::string format = "text";
  std::ostringstream buffer;
  void flush() { std::cout << buffer.str(); }
};

long long rationalAsInteger(const Rational& r, bool* ok) {
  if (denominator(r) != 1 || abs(numerator(r)) > 1'000'000'000) {
    *ok = false;
    return 0;
  }
  *ok = true;
  return static_cast<long long>(numerator(r));
}

void attachResonanceFlags(AmplitudeResult& result, const Prime& p,
                          const Rational& alphaS, const Rational& alphaT) {
  auto classify = [&](const char* label, const Rational& a) {
    bool isInt = false;
    long long v = rationalAsInteger(a, &isInt);
    if (!isInt) return;
    if (v <= 0 && v % static_cast<long long>(p.value()) != 0)
      result.resonanceFlags.push_back(
          std::string(label) + " = " + std::to_string(v) +
          " lies on the resonance locus (nonpositive integer prime to p)");
  };
  classify("alpha(s)", alphaS);
  classify("alpha(t)", alphaT);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> argStorage;
  try {
    argStorage = expandConfig(argc, argv);
  } catch (const UsageError& e) {
    fail(3, "usage", e.what());
  }
  std::vector<const char*> argPtrs{argv[0]};
  for (const auto& a : argStorage) argPtrs.push_back(a.c_str());

  CLI::App app{"exact p-adic / q-deformed gamma functions and the amplitude "
               "families built from them"};
  app.require_subcommand(1);

  Output out;
  bool jsonFlag = false;
  unsigned digits = 50;
  std::uint64_t costCeiling = 100'000'000ULL;
  if (const char* env = std::getenv("VENQ_COST_CEILING"))
    costCeiling = std::strtoull(env, nullptr, 10);
  std::string configPath;  // consumed by expandConfig; registered to parse

  app.add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_flag("--json", jsonFlag, "Shorthand for --format json");
  app.add_option("--digits", digits,
                 "Decimal digits for the classical high-precision engine")
      ->capture_default_str();
  app.add_option("--cost-ceiling", costCeiling,
                 "Max product terms per gamma evaluation "
                 "(env VENQ_COST_CEILING)")
      ->capture_default_str();
  app.add_option("--config", configPath, "JSON file with flag defaults");

  // ---- gamma ----
  auto* cmdGamma = app.add_subcommand("gamma", "Evaluate a gamma function");
  cmdGamma->fallthrough();
  std::string gKind, gX = "1", gQ;
  std::uint64_t gP = 3;
  int gPrec = 8;
  cmdGamma->add_option("--kind", gKind, "p | pq | q")->required()
      ->check(CLI::IsMember({"p", "pq", "q"}));
  cmdGamma->add_option("--p", gP, "Prime (kinds p, pq)");
  cmdGamma->add_option("--x", gX, "Argument: integer or rational a/b "
                                  "(p-adic kinds), decimal (kind q)")
      ->required();
  cmdGamma->add_option("--q", gQ, "Deformation: rational a/b (kind pq), "
                                  "decimal in (0,1) (kind q)");
  cmdGamma->add_option("--prec", gPrec, "p-adic digits")->capture_default_str();

  // ---- amp ----
  auto* cmdAmp = app.add_subcommand("amp", "Evaluate a 4-point or n-point "
                                           "amplitude");
  cmdAmp->fallthrough();
  std::string aMode, aAlphaS, aAlphaT, aQ, aInput, aKinematics,
      aSlope = "1";
  std::uint64_t aP = 3;
  int aPrec = 8;
  std::size_t aLevels = 4096;
  double aTol = 1e-20;
  cmdAmp->add_option("--mode", aMode,
                     "padic | pq | q-ratio | q-sum | n-point")
      ->required()
      ->check(CLI::IsMember({"padic", "pq", "q-ratio", "q-sum", "n-point"}));
  cmdAmp->add_option("--p", aP, "Prime (modes padic, pq)");
  cmdAmp->add_option("--alpha-s", aAlphaS, "alpha(s): integer/rational, or "
                                           "decimal in classical modes");
  cmdAmp->add_option("--alpha-t", aAlphaT, "alpha(t)");
  cmdAmp->add_option("--q", aQ, "Deformation parameter");
  cmdAmp->add_option("--prec", aPrec, "p-adic digits")->capture_default_str();
  cmdAmp->add_option("--levels", aLevels, "Max truncation level for sums")
      ->capture_default_str();
  cmdAmp->add_option("--tol", aTol, "Relative truncation tolerance")
      ->capture_default_str();
  cmdAmp->add_option("--input", aInput, "n-point JSON input file");
  cmdAmp->add_option("--kinematics", aKinematics,
                     "Kinematics JSON file (derives alpha(s), alpha(t))");
  cmdAmp->add_option("--slope", aSlope, "Regge slope alpha' (rational)")
      ->capture_default_str();

  // ---- scan ----
  auto* cmdScan = app.add_subcommand("scan", "Scan the resonance criterion "
                                             "over integer channel values");
  cmdScan->fallthrough();
  std::uint64_t sP = 3;
  long long sFrom = 0, sTo = 0;
  std::string sSlope;
  cmdScan->add_option("--p", sP, "Prime")->required();
  cmdScan->add_option("--from", sFrom, "Range start")->required();
  cmdScan->add_option("--to", sTo, "Range end")->required();
  cmdScan->add_option("--slope", sSlope, "Recorded in the output header");

  // ---- verify ----
  auto* cmdVerify = app.add_subcommand("verify", "Run a property suite");
  cmdVerify->fallthrough();
  std::string vSuite;
  verify::SuiteConfig vCfg;
  std::vector<std::uint64_t> vPrimes;
  cmdVerify->add_option("--suite", vSuite,
                        "recursions | limits | qbinomial | ratio18 | npoint "
                        "| kinematics | all")
      ->required();
  cmdVerify->add_option("--p", vPrimes, "Primes for the p-adic suites");
  cmdVerify->add_option("--prec", vCfg.precision, "p-adic digits")
      ->capture_default_str();
  cmdVerify->add_option("--seed", vCfg.seed, "Seed for randomized families")
      ->capture_default_str();
  cmdVerify->add_option("--count", vCfg.count, "Checks per random family")
      ->capture_default_str();
  cmdVerify->add_option("--tol", vCfg.tolerance, "Classical tolerance")
      ->capture_default_str();

  try {
    app.parse(static_cast<int>(argPtrs.size()), argPtrs.data());
  } catch (const CLI::CallForHelp& e) {
    std::exit(app.exit(e));
  } catch (const CLI::ParseError& e) {
    fail(3, "usage", e.what());
  }
  if (jsonFlag) out.format = "json";

  try {
    setClassicalDigits(digits);
    GammaOptions gOpts;
    gOpts.costCeiling = costCeiling;

    if (app.got_subcommand(cmdGamma)) {
      if (gKind == "q") {
        if (gQ.empty()) throw UsageError("--q is required for --kind q");
        QReal q = QReal::parse(gQ);
        Real value = gammaQ(realFromText(gX), q);
        if (out.format == "json") {
          Json j;
          j["kind"] = "q";
          j["x"] = gX;
          j["q"] = gQ;
          j["value"] = realToString(value);
          out.buffer << j.dump() << "\n";
        } else {
          out.buffer << realDisplay(value) << "\n";
        }
      } else {
        Prime p(gP);
        Rational x = parseRational(gX);
        Json j;
        j["kind"] = gKind;
        j["p"] = gP;
        j["x"] = gX;
        PadicNumber value = PadicNumber::zeroClass(p, 1);
        if (gKind == "p") {
          bool isInt = false;
          long long n = rationalAsInteger(x, &isInt);
          if (isInt && n >= 1) {
            value = gammaPInt(BigInt(n - 1), p, gPrec, gOpts);
            j["evaluation"] = "finite_product";
          } else {
            auto xa = PadicNumber::fromRational(x, p, gPrec + 20);
            GammaValue gv = gammaP(xa, gPrec, gOpts);
            value = gv.value;
            j["evaluation"] = "continuity";
            j["verified_digits"] = gv.verifiedDigits;
            j["cost"] = gv.cost;
          }
        } else {
          if (gQ.empty()) throw UsageError("--q is required for --kind pq");
          Rational qr = parseRational(gQ);
          PadicQ q = PadicQ::fromRational(qr, p, gPrec + 40);
          j["q"] = rationalToString(qr);
          bool isInt = false;
          long long n = rationalAsInteger(x, &isInt);
          if (isInt && n >= 1) {
            value = gammaPqInt(BigInt(n - 1), q, gPrec, gOpts);
            j["evaluation"] = "finite_product";
          } else {
            auto xa = PadicNumber::fromRational(x, p, gPrec + 40);
            GammaValue gv = gammaPq(xa, q, gPrec, gOpts);
            value = gv.value;
            j["evaluation"] = "continuity";
            j["verified_digits"] = gv.verifiedDigits;
            j["cost"] = gv.cost;
          }
        }
        if (out.format == "json") {
          j["value"] = toJson(value);
          j["canonical"] = value.str();
          out.buffer << j.dump() << "\n";
        } else {
          out.buffer << value.str() << "\n";
        }
      }
      out.flush();
      return 0;
    }

    if (app.got_subcommand(cmdAmp)) {
      TruncationPolicy policy;
      policy.tolerance = aTol;
      AmplitudeResult result;

      auto alphasFromFlags = [&]() -> std::pair<Rational, Rational> {
        if (!aKinematics.empty()) {
          std::ifstream in(aKinematics);
          if (!in)
            throw UsageError("cannot open kinematics file: " + aKinematics);
          Json j;
          in >> j;
          Kinematics kin = kinematicsFromJson(j);
          if (!aSlope.empty()) kin.slope = parseRational(aSlope);
          MandelstamSet ms = mandelstam(kin);
          return {alphaOf(ms.s, kin.slope), alphaOf(ms.t, kin.slope)};
        }
        if (aAlphaS.empty() || aAlphaT.empty())
          throw UsageError("need --alpha-s/--alpha-t or --kinematics");
        return {parseRational(aAlphaS), parseRational(aAlphaT)};
      };

      if (aMode == "padic" || aMode == "pq") {
        Prime p(aP);
        auto [ras, rat] = alphasFromFlags();
        auto as = PadicNumber::fromRational(ras, p, aPrec + 24);
        auto at = PadicNumber::fromRational(rat, p, aPrec + 24);
        if (aMode == "padic") {
          result = ampP(as, at, aPrec, gOpts);
        } else {
          if (aQ.empty()) throw UsageError("--q is required for --mode pq");
          PadicQ q = PadicQ::fromRational(parseRational(aQ), p, aPrec + 44);
          result = ampPq(as, at, q, aPrec, gOpts);
        }
        attachResonanceFlags(result, p, ras, rat);
      } else if (aMode == "q-ratio" || aMode == "q-sum") {
        if (aQ.empty()) throw UsageError("--q is required for classical modes");
        QReal q = QReal::parse(aQ);
        Real as, at;
        if (!aKinematics.empty()) {
          auto [ras, rat] = alphasFromFlags();
          as = realFromText(rationalToString(ras));
          at = realFromText(rationalToString(rat));
        } else {
          if (aAlphaS.empty() || aAlphaT.empty())
            throw UsageError("need --alpha-s/--alpha-t or --kinematics");
          as = realFromText(aAlphaS);
          at = realFromText(aAlphaT);
        }
        result = aMode == "q-ratio" ? ampQRatio(as, at, q, policy)
                                    : ampQDoubleSum(as, at, q, policy, aLevels);
      } else {  // n-point
        if (aInput.empty()) throw UsageError("--input is required for n-point");
        std::ifstream in(aInput);
        if (!in) throw UsageError("cannot open n-point file: " + aInput);
        Json j;
        in >> j;
        NPointInput np = npointFromJson(j);
        ChannelSet cs = channels(np.n);
        result = ampN(cs, np.alphas, np.q, policy, np.maxLevel);
      }

      if (out.format == "json") {
        out.buffer << toJson(result).dump() << "\n";
      } else {
        if (result.padicValue)
          out.buffer << result.padicValue->str() << "\n";
        else
          out.buffer << realDisplay(*result.scalarValue) << "\n";
        for (const auto& f : result.resonanceFlags)
          out.buffer << "# " << f << "\n";
      }
      out.flush();
      return 0;
    }

    if (app.got_subcommand(cmdScan)) {
      Prime p(sP);
      auto table = resonanceScan(sFrom, sTo, p);
      if (out.format == "json") {
        Json j;
        j["p"] = sP;
        if (!sSlope.empty()) j["slope"] = sSlope;
        j["entries"] = Json::array();
        for (const auto& e : table)
          j["entries"].push_back(Json{{"alpha", e.alpha}, {"flagged", e.flagged}});
        out.buffer << j.dump() << "\n";
      } else {
        out.buffer << "alpha,flagged\n";
        for (const auto& e : table)
          out.buffer << e.alpha << "," << (e.flagged ? "true" : "false") << "\n";
      }
      out.flush();
      return 0;
    }

    if (app.got_subcommand(cmdVerify)) {
      if (!vPrimes.empty()) vCfg.primes = vPrimes;
      vCfg.costCeiling = costCeiling;
      std::size_t failures = 0, checks = 0;
      Json firstFailure;
      auto emit = [&](const verify::CheckResult& r) {
        ++checks;
        if (!r.pass && failures++ == 0) {
          firstFailure = Json{{"check", r.check},
                              {"inputs", r.inputs},
                              {"metric", r.metric}};
        }
        if (out.format == "json") {
          Json j;
          j["check"] = r.check;
          j["inputs"] = r.inputs;
          j["status"] = r.pass ? "pass" : "fail";
          j["metric"] = r.metric;
          out.buffer << j.dump() << "\n";
        } else if (out.format == "csv") {
          out.buffer << r.check << "," << (r.pass ? "pass" : "fail") << ","
                     << r.metric << "\n";
        } else {
          out.buffer << (r.pass ? "ok   " : "FAIL ") << r.check << "  ["
                     << r.metric << "]\n";
        }
      };
      if (!verify::runSuite(vSuite, vCfg, emit))
        throw UsageError("unknown suite: " + vSuite);
      if (out.format == "json") {
        Json summary;
        summary["suite"] = vSuite;
        summary["seed"] = vCfg.seed;
        summary["checks"] = checks;
        summary["failures"] = failures;
        out.buffer << summary.dump() << "\n";
      } else {
        out.buffer << checks - failures << "/" << checks << " checks passed\n";
      }
      out.flush();
      if (failures > 0) {
        Json j;
        j["error"]["class"] = "verification";
        j["error"]["message"] = "suite '" + vSuite + "' failed";
        j["error"]["counterexample"] = firstFailure;
        std::cerr << j.dump() << "\n";
        return 2;
      }
      return 0;
    }
  } catch (const UsageError& e) {
    fail(3, "usage", e.what());
  } catch (const PoleError& e) {
    fail(1, "pole", e.what());
  } catch (const KinematicsError& e) {
    fail(1, "kinematics", e.what());
  } catch (const DomainError& e) {
    fail(1, "domain", e.what());
  } catch (const PrecisionError& e) {
    fail(2, "precision", e.what());
  } catch (const CostLimitError& e) {
    fail(2, "cost", e.what());
  } catch (const TruncationError& e) {
    fail(2, "truncation", e.what());
  } catch (const std::exception& e) {
    fail(2, "internal", e.what());
  }
  return 0;
}
