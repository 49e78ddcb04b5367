#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = wcospec::cli::run(args, o, e);
  return {code, o.str(), e.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze reports the annulus") {
  const Outcome r = run({"analyze", "--symbol", "1", "--auto", "canonical:0.5", "--space", "hardy"});
  REQUIRE(r.code == 0);
  const json a = r.report()["result"]["annulus"];
  CHECK(a["inner_lower"].get<double>() == doctest::Approx(0.5774).epsilon(1e-4));
  CHECK(a["outer_upper"].get<double>() == doctest::Approx(1.7321).epsilon(1e-4));

  const Outcome b = run({"analyze", "--symbol", "2+z", "--auto", "canonical:0.5", "--space", "bergman:0"});
  REQUIRE(b.code == 0);
  const json ab = b.report()["result"]["annulus"];
  CHECK(ab["gamma"].get<double>() == 1.0);
  CHECK(ab["inclusion_inner"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-5));
  CHECK(ab["inclusion_outer"].get<double>() == doctest::Approx(9).epsilon(1e-5));
}

TEST_CASE("usage errors exit 64") {
  CHECK(run({"analyze", "--auto", "canonical:0.5"}).code == wcospec::cli::kExitUsage);
  CHECK(run({}).code == wcospec::cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == wcospec::cli::kExitUsage);
  CHECK(run({"certify", "--symbol", "1"}).code == wcospec::cli::kExitUsage);
  CHECK(run({"analyze", "--symbol", "1", "--N", "2"}).code == wcospec::cli::kExitUsage);

  const Outcome s = run({"analyze", "--symbol", "2+*z"});
  CHECK(s.code == wcospec::cli::kExitUsage);
  const json e = s.report()["error"];
  CHECK(e["kind"] == "SyntaxError");
  CHECK(e["position"] == 2);
  CHECK(run({"analyze", "--symbol", "1", "--auto", "canonical:2"}).code == wcospec::cli::kExitUsage);
}

TEST_CASE("non-input errors exit 3 with structured JSON") {
  const Outcome r = run({"analyze", "--symbol", "z"});
  CHECK(r.code == wcospec::cli::kExitFailed);
  CHECK(r.report()["error"]["kind"] == "NotInvertible");
}

TEST_CASE("certify exit codes") {
  const Outcome ok = run({"certify", "--symbol", "1", "--auto", "canonical:0.5", "--lambda", "1"});
  CHECK(ok.code == 0);
  const json res = ok.report()["result"];
  CHECK(res["verdict"] == "certified_at_scale");
  for (const auto& c : res["checks"]) CHECK(c["pass"].get<bool>());

  const Outcome far = run({"certify", "--symbol", "1", "--auto", "canonical:0.5", "--lambda", "10"});
  CHECK(far.code == wcospec::cli::kExitFailed);
  CHECK(far.out.find("NoEigenvectorFound") != std::string::npos);

  const Outcome empty = run({"certify", "--symbol", "pow(1+0.5*z, -2)", "--auto", "canonical:0.5", "--lambda", "1"});
  CHECK(empty.code == wcospec::cli::kExitWindowEmpty);
  CHECK(empty.report()["result"]["verdict"] == "window_empty");
}

TEST_CASE("reports are reproducible and self-describing") {
  const std::vector<std::string> args = {"certify", "--symbol", "2+z", "--lambda", "1+0.5i", "--K", "3"};
  const Outcome a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const json j = a.report();
  for (const char* key : {"tool", "version", "N", "tolerances", "branch_convention", "sampling_ladder", "run_config"})
    CHECK(j.contains(key));
  CHECK(j["run_config"]["symbol"] == "2+z");
  CHECK(j["run_config"]["K"] == 3);
  CHECK(j["run_config"]["seed"].is_number());
  const json lam = j["result"]["inputs"]["lambda"];
  CHECK(lam["re"].get<double>() == 1.0);
  CHECK(lam["im"].get<double>() == 0.5);
}

TEST_CASE("--out writes the report file") {
  const auto path = std::filesystem::temp_directory_path() / "wcospec_cli_test.json";
  std::filesystem::remove(path);
  const Outcome r = run({"analyze", "--symbol", "2+z", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  CHECK(j["command"] == "analyze");
  std::filesystem::remove(path);
}

TEST_CASE("decompose") {
  const Outcome r = run({"decompose", "--symbol", "z^3", "--mu", "1.5", "--nu", "1", "--N", "64"});
  REQUIRE(r.code == 0);
  const json d = r.report()["result"];
  CHECK(d["m"] == 2);
  CHECK(d["n"] == 1);
  CHECK(d["reconstruction_error"].get<double>() < 1e-14);
}

TEST_CASE("spectrum --quick") {
  const Outcome r = run({"spectrum", "--symbol", "2+z", "--quick", "--lambda", "4"});
  REQUIRE(r.code == 0);
  const json res = r.report()["result"];
  CHECK(res.contains("gelfand"));
  CHECK(res.contains("resolvent"));
}

TEST_CASE("selftest") {
  const auto t0 = std::chrono::steady_clock::now();
  const Outcome q = run({"selftest", "--quick"});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(q.code == 0);
  CHECK(secs < 5.0);
  CHECK(q.out.find("FAIL ") == std::string::npos);

  const Outcome small = run({"selftest", "--quick", "--N", "16"});
  CHECK(small.code == 0);
  CHECK(small.out.find("WARN") != std::string::npos);
  CHECK(small.out.find("FAIL ") == std::string::npos);
}

}
