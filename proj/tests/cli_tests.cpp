#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "venq/json_io.hpp"
#include "venq/padic.hpp"
#include "venq/qseries.hpp"

using namespace venq;

namespace {

struct RunResult {
  int exitCode;
  std::string stdoutText;
  std::string stderrText;
};

RunResult runCli(const std::string& args) {
  namespace fs = std::filesystem;
  static int counter = 0;
  fs::path errFile = fs::temp_directory_path() /
                     ("venq_cli_stderr_" + std::to_string(counter++) + ".txt");
  std::string cmd = std::string(VENQ_CLI_PATH) + " " + args + " 2>" +
                    errFile.string();
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    output.append(buf.data(), got);
  int status = pclose(pipe);
  std::string err;
  {
    std::ifstream in(errFile);
    std::stringstream ss;
    ss << in.rdbuf();
    err = ss.str();
  }
  fs::remove(errFile);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return RunResult{code, output, err};
}

}  // namespace

TEST_CASE("gamma subcommand") {
  venq::setClassicalDigits(50);
  SUBCASE("kind p: Gamma_7(8) = 720") {
    auto r = runCli("gamma --kind p --p 7 --x 8 --prec 6");
    CHECK(r.exitCode == 0);
    auto expected = PadicNumber::fromInteger(BigInt(720), Prime(7), 6);
    CHECK(r.stdoutText == expected.str() + "\n");
  }
  SUBCASE("kind pq: Gamma_{5,q}(1) = -1 for q = 6") {
    auto r = runCli("gamma --kind pq --p 5 --x 1 --q 6/1 --prec 8");
    CHECK(r.exitCode == 0);
    auto expected = PadicNumber::fromInteger(BigInt(-1), Prime(5), 8);
    CHECK(r.stdoutText == expected.str() + "\n");
  }
  SUBCASE("kind q: Gamma_q(3) = 1 + q") {
    auto r = runCli("gamma --kind q --x 3 --q 0.5");
    CHECK(r.exitCode == 0);
    CHECK(r.stdoutText == "1.5\n");
  }
  SUBCASE("json output carries the digit schema") {
    auto r = runCli("gamma --kind p --p 7 --x 8 --prec 6 --json");
    CHECK(r.exitCode == 0);
    Json j = Json::parse(r.stdoutText);
    CHECK(j["value"]["p"] == 7);
    CHECK(j["value"]["precision"] == 6);
  }
}

TEST_CASE("amp subcommand") {
  SUBCASE("arithmetic spot value 1/4") {
    auto r = runCli("amp --mode padic --p 3 --alpha-s 2 --alpha-t 3 --prec 10");
    CHECK(r.exitCode == 0);
    auto expected = PadicNumber::fromRational(Rational(1, 4), Prime(3), 10);
    CHECK(r.stdoutText == expected.str() + "\n");
  }
  SUBCASE("dual classical forms agree to 1e-12") {
    auto r1 = runCli("amp --mode q-sum --q 0.5 --alpha-s 1 --alpha-t 1 "
                     "--levels 64 --json");
    auto r2 = runCli("amp --mode q-ratio --q 0.5 --alpha-s 1 --alpha-t 1 --json");
    REQUIRE(r1.exitCode == 0);
    REQUIRE(r2.exitCode == 0);
    Real v1(Json::parse(r1.stdoutText)["value"].get<std::string>());
    Real v2(Json::parse(r2.stdoutText)["value"].get<std::string>());
    CHECK(abs(v1 - v2) <= Real("1e-12") * abs(v1));
  }
  SUBCASE("n-point input with n = 4 matches the double sum") {
    namespace fs = std::filesystem;
    fs::path file = fs::temp_directory_path() / "venq_four_point.json";
    {
      std::ofstream out(file);
      out << R"({"n": 4, "alphas": {"1,2": 2, "2,3": 3}, "q": "0.3",)"
          << R"( "max_level": 256})";
    }
    auto rn = runCli("amp --mode n-point --input " + file.string() + " --json");
    auto rd = runCli("amp --mode q-sum --q 0.3 --alpha-s 2 --alpha-t 3 --json");
    REQUIRE(rn.exitCode == 0);
    REQUIRE(rd.exitCode == 0);
    Real vn(Json::parse(rn.stdoutText)["value"].get<std::string>());
    Real vd(Json::parse(rd.stdoutText)["value"].get<std::string>());
    CHECK(abs(vn - vd) <= Real("1e-12") * abs(vn));
    fs::remove(file);
  }
  SUBCASE("kinematics file drives the p-adic amplitude") {
    namespace fs = std::filesystem;
    fs::path file = fs::temp_directory_path() / "venq_kinematics.json";
    {
      std::ofstream out(file);
      // s = -4E^2 = -36, t and u from the rotated spatial parts
      out << R"({"metric": [-1, 1, 1, 1],)"
          << R"( "momenta": [[3, 3, 1, 1], [3, -3, -1, -1],)"
          << R"( [-3, 3, 1, 1], [-3, -3, -1, -1]], "slope": "1"})";
    }
    auto r = runCli("amp --mode padic --p 5 --kinematics " + file.string() +
                    " --prec 6 --json");
    CHECK(r.exitCode == 0);
    fs::remove(file);
  }
  SUBCASE("quantum-extended mode reduces to the finite products") {
    auto r = runCli("amp --mode pq --p 3 --alpha-s 2 --alpha-t 2 --q 4/1 "
                    "--prec 6");
    REQUIRE(r.exitCode == 0);
    PadicQ q = PadicQ::fromRational(Rational(4), Prime(3), 20);
    auto direct = gammaPqInt(BigInt(1), q, 6) * gammaPqInt(BigInt(1), q, 6) /
                  gammaPqInt(BigInt(3), q, 6);
    CHECK(r.stdoutText == direct.str() + "\n");
  }
  SUBCASE("resonance flags appear for flagged integer exponents") {
    auto r = runCli("amp --mode padic --p 3 --alpha-s=-2 --alpha-t 3 "
                    "--prec 5 --json");
    REQUIRE(r.exitCode == 0);
    Json j = Json::parse(r.stdoutText);
    REQUIRE(j["resonance_flags"].size() == 1);
  }
}

TEST_CASE("scan subcommand") {
  SUBCASE("criterion over a negative range") {
    auto r = runCli("scan --p 3 --from -10 --to 2 --json");
    REQUIRE(r.exitCode == 0);
    Json j = Json::parse(r.stdoutText);
    std::vector<long long> flagged;
    for (const auto& e : j["entries"])
      if (e["flagged"].get<bool>()) flagged.push_back(e["alpha"].get<long long>());
    CHECK(flagged == std::vector<long long>{-10, -8, -7, -5, -4, -2, -1});
  }
  SUBCASE("empty range exits 0 with an empty table") {
    auto r = runCli("scan --p 3 --from 5 --to 2 --json");
    CHECK(r.exitCode == 0);
    CHECK(Json::parse(r.stdoutText)["entries"].empty());
  }
  SUBCASE("p = 2 flags only odd negatives") {
    auto r = runCli("scan --p 2 --from -6 --to 0 --json");
    REQUIRE(r.exitCode == 0);
    for (const auto& e : Json::parse(r.stdoutText)["entries"]) {
      long long a = e["alpha"].get<long long>();
      CHECK(e["flagged"].get<bool>() == (a < 0 && a % 2 != 0));
    }
  }
}

TEST_CASE("verify subcommand") {
  SUBCASE("recursions suite passes and is deterministic") {
    std::string args = "verify --suite recursions --p 3 --prec 5 --seed 42 "
                       "--count 6 --json";
    auto r1 = runCli(args);
    auto r2 = runCli(args);
    CHECK(r1.exitCode == 0);
    CHECK(r2.exitCode == 0);
    CHECK(r1.stdoutText == r2.stdoutText);
    CHECK(!r1.stdoutText.empty());
  }
  SUBCASE("qbinomial suite passes") {
    auto r = runCli("verify --suite qbinomial --json");
    CHECK(r.exitCode == 0);
  }
  SUBCASE("recursions at the documented flag combination") {
    auto r = runCli("verify --suite recursions --p 3 --prec 6 --seed 42 "
                    "--count 4");
    CHECK(r.exitCode == 0);
  }
  SUBCASE("help exits 0") {
    auto r = runCli("--help");
    CHECK(r.exitCode == 0);
    CHECK(r.stdoutText.find("gamma") != std::string::npos);
  }
  SUBCASE("unknown suite is a usage error") {
    auto r = runCli("verify --suite nonsense");
    CHECK(r.exitCode == 3);
  }
}

TEST_CASE("exit code contract") {
  SUBCASE("domain error -> 1") {
    // q = 2 has |q-1|_5 = 1, outside the valid region
    auto r = runCli("gamma --kind pq --p 5 --x 1 --q 2/1 --prec 6");
    CHECK(r.exitCode == 1);
    CHECK(r.stdoutText.empty());
    Json j = Json::parse(r.stderrText);
    CHECK(j["error"]["class"] == "domain");
  }
  SUBCASE("cost ceiling -> 2") {
    auto r = runCli("gamma --kind p --p 5 --x=-1/1 --prec 6 --cost-ceiling 100");
    CHECK(r.exitCode == 2);
    CHECK(r.stdoutText.empty());
  }
  SUBCASE("usage error -> 3") {
    auto r = runCli("gamma --kind z --x 1");
    CHECK(r.exitCode == 3);
  }
  SUBCASE("non-prime p -> 1") {
    auto r = runCli("gamma --kind p --p 6 --x 2 --prec 4");
    CHECK(r.exitCode == 1);
  }
  SUBCASE("divergent double-sum regime -> 1") {
    auto r = runCli("amp --mode q-sum --q 0.5 --alpha-s=-1 --alpha-t 1");
    CHECK(r.exitCode == 1);
    CHECK(Json::parse(r.stderrText)["error"]["class"] == "domain");
  }
}

TEST_CASE("config file mirrors flags") {
  namespace fs = std::filesystem;
  fs::path file = fs::temp_directory_path() / "venq_config.json";
  {
    std::ofstream out(file);
    out << R"({"prec": 6, "json": true})";
  }
  auto viaConfig = runCli("gamma --kind p --p 7 --x 8 --config " + file.string());
  auto direct = runCli("gamma --kind p --p 7 --x 8 --prec 6 --json");
  CHECK(viaConfig.exitCode == 0);
  CHECK(viaConfig.stdoutText == direct.stdoutText);
  // explicit flag wins over the config value
  auto overridden = runCli("gamma --kind p --p 7 --x 8 --prec 9 --config " +
                           file.string());
  Json j = Json::parse(overridden.stdoutText);
  CHECK(j["value"]["precision"] == 9);
  fs::remove(file);
}

TEST_CASE("cost ceiling environment variable") {
  auto r = runCli("gamma --kind p --p 5 --x=-1/1 --prec 8 --json");
  CHECK(r.exitCode == 0);  // default ceiling admits 2 * 5^10 terms
  setenv("VENQ_COST_CEILING", "50", 1);
  auto blocked = runCli("gamma --kind p --p 5 --x=-1/1 --prec 8");
  unsetenv("VENQ_COST_CEILING");
  CHECK(blocked.exitCode == 2);
}
