// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result harness(const std::string& args) {
  const std::string cmd = std::string("\"") + ZC_HARNESS + "\" " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path only_file(const std::filesystem::path& dir, const std::string& suffix) {
  std::filesystem::path found;
  int count = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0 &&
        name.find(".transcript") == std::string::npos) {
      found = e.path();
      ++count;
    }
  }
  REQUIRE(count == 1);
  return found;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path("cli_out") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bounds output is identical across invocations") {
    const Result a = harness("bounds");
    const Result b = harness("bounds");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const json j = json::parse(a.out);
    CHECK(j.at("kappa_ratio_holds").get<bool>());
  }

  TEST_CASE("invalid configurations are rejected") {
    const Result d4 = harness("bounds --dbar 4");
    CHECK(d4.code != 0);
    CHECK(d4.out.find("dbar") != std::string::npos);
    const Result lowbeta = harness("verify --beta 1");
    CHECK(lowbeta.code != 0);
    CHECK(lowbeta.out.find("must exceed") != std::string::npos);
    const Result unknown = harness("frobnicate");
    CHECK(unknown.code != 0);
    const Result algo = harness("run --algo sgd --out cli_out/never");
    CHECK(algo.code != 0);
  }

  TEST_CASE("run writes a trace, a summary and a transcript") {
    const auto dir = fresh_dir("penalty");
    const Result r = harness("run --algo penalty --out " + dir.string());
    CHECK(r.code == 0);
    const json s = json::parse(slurp(only_file(dir, ".json")));
    CHECK(s.at("algorithm") == "penalty");
    CHECK(s.at("min_nonstationary_iterations").get<int>() >= 8);
    CHECK(s.at("support_threshold").get<double>() == 8.0);
    CHECK(s.at("support_threshold_holds").get<bool>());
    CHECK(s.at("class_verifier") == "PASS");
    CHECK(s.at("front_rate_violations").get<int>() == 0);
    CHECK(s.at("theorem_threshold_note").get<std::string>().find("upper estimate") != std::string::npos);
    CHECK(s.contains("oracles_to_eps"));
    const std::string csv = slurp(only_file(dir, ".csv"));
    CHECK(csv.rfind("t,oracle_count,J,", 0) == 0);
    CHECK(std::filesystem::exists(only_file(dir, ".json").string().substr(0, only_file(dir, ".json").string().size() - 5) + ".transcript.jsonl"));
  }

  TEST_CASE("linearized ADMM summary") {
    const auto dir = fresh_dir("ladmm");
    const Result r = harness("run --algo ladmm --out " + dir.string());
    CHECK(r.code == 0);
    const json s = json::parse(slurp(only_file(dir, ".json")));
    CHECK(s.at("class").get<int>() == 2);
    CHECK(s.at("min_nonstationary_iterations").get<int>() >= 14);
    CHECK(s.at("support_threshold").get<double>() == 14.0);
  }

  TEST_CASE("a run without iterations still reports the starting residual") {
    const auto dir = fresh_dir("empty");
    const Result r = harness("run --algo penalty --max-oracles 1 --out " + dir.string());
    CHECK(r.code == 0);
    const json s = json::parse(slurp(only_file(dir, ".json")));
    CHECK(s.at("iterations").get<int>() == 0);
    CHECK(s.at("residual_AP_initial").get<double>() > 0.1);
    CHECK(s.at("certificate_lb_initial").get<double>() == doctest::Approx(0.2528).epsilon(1e-4));
    CHECK(s.at("oracles_to_eps") == "not reached");
  }

  TEST_CASE("frontplot emits traces and staircases") {
    const auto dir = fresh_dir("front");
    const Result r = harness("frontplot --out " + dir.string());
    CHECK(r.code == 0);
    const std::string csv = slurp(only_file(dir, ".csv"));
    CHECK(csv.rfind("series,t,J\n", 0) == 0);
    CHECK(csv.find("\npenalty,0,0\n") != std::string::npos);
    CHECK(csv.find("\nalm,0,0\n") != std::string::npos);
    CHECK(csv.find("\nladmm,0,0\n") != std::string::npos);
    CHECK(csv.find("\nstaircase_class1,2,2\n") != std::string::npos);
    CHECK(csv.find("\nstaircase_class1,4,3\n") != std::string::npos);
    CHECK(csv.find("\nstaircase_class1,6,4\n") != std::string::npos);
  }

  TEST_CASE("config file with flag overrides") {
    const auto dir = fresh_dir("config");
    const auto cfg = std::filesystem::path("cli_out") / "config.json";
    {
      std::ofstream out(cfg);
      out << R"({"m1": 2, "m2": 4, "dbar": 5, "eps": 0.1, "algo": "alm", "max_oracles": 90})";
    }
    const Result b = harness("bounds --config " + cfg.string());
    CHECK(b.code == 0);
    CHECK(json::parse(b.out).at("sizes").at("m").get<int>() == 24);
    const Result o = harness("bounds --config " + cfg.string() + " --m2 2");
    CHECK(json::parse(o.out).at("sizes").at("m").get<int>() == 12);
    const Result r = harness("run --config " + cfg.string() + " --out " + dir.string());
    CHECK(r.code == 0);
    const json s = json::parse(slurp(only_file(dir, ".json")));
    CHECK(s.at("algorithm") == "alm");
    CHECK(s.at("oracle_calls").get<int>() == 90);
    const Result bad = harness("bounds --config " + (dir / "missing.json").string());
    CHECK(bad.code != 0);
  }
}
