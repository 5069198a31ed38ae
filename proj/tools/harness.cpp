// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: verify | run | frontplot | bounds.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zerochain/algorithms.hpp"
#include "zerochain/oracle.hpp"
#include "zerochain/stationarity.hpp"
#include "zerochain/suites.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace zerochain;

struct Settings {
  InstanceParams params;
  std::string algo = "penalty";
  std::size_t max_oracles = 500;
  std::uint64_t seed = 20260101;
  std::string out;
  double penalty = 1.0;
  double dual_step = 1.0;
};

struct Flags {
  std::optional<int> m1, m2, dbar;
  std::optional<double> eps, lf, beta;
  std::optional<std::string> algo;
  std::optional<std::size_t> max_oracles;
  std::optional<std::string> out, config;
  std::optional<std::uint64_t> seed;
};

Settings resolve(const Flags& f) {
  Settings s;
  if (f.config) {
    s.params = InstanceParams::from_file(*f.config);
    std::ifstream in(*f.config);
    const json j = json::parse(in);
    if (j.contains("algo")) s.algo = j.at("algo").get<std::string>();
    if (j.contains("max_oracles")) s.max_oracles = j.at("max_oracles").get<std::size_t>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) s.out = j.at("out").get<std::string>();
    if (j.contains("penalty")) s.penalty = j.at("penalty").get<double>();
    if (j.contains("dual_step")) s.dual_step = j.at("dual_step").get<double>();
  }
  if (f.m1) s.params.m1 = *f.m1;
  if (f.m2) s.params.m2 = *f.m2;
  if (f.dbar) s.params.dbar = *f.dbar;
  if (f.eps) s.params.eps = *f.eps;
  if (f.lf) s.params.lf = *f.lf;
  if (f.beta) s.params.beta = *f.beta;
  if (f.algo) s.algo = *f.algo;
  if (f.max_oracles) s.max_oracles = *f.max_oracles;
  if (f.seed) s.seed = *f.seed;
  if (f.out) s.out = *f.out;
  if (!(s.penalty >= 0.0) || !(s.dual_step >= 0.0)) {
    throw std::invalid_argument("penalty and dual_step must be nonnegative");
  }
  return s;
}

json settings_json(const Settings& s) {
  json j = json::parse(s.params.to_json());
  j["algo"] = s.algo;
  j["max_oracles"] = s.max_oracles;
  j["seed"] = s.seed;
  j["penalty"] = s.penalty;
  j["dual_step"] = s.dual_step;
  return j;
}

std::string config_hash(const Settings& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : settings_json(s).dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::filesystem::path out_file(const Settings& s, const std::string& stem, const std::string& ext) {
  std::filesystem::path dir = s.out.empty() ? std::filesystem::path(".") : std::filesystem::path(s.out);
  std::filesystem::create_directories(dir);
  return dir / (stem + "-" + config_hash(s) + ext);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

RunTrace run_algorithm(const Instance& inst, const Settings& s, const std::string& algo,
                       bool retain) {
  RunOptions o;
  o.max_oracles = s.max_oracles;
  o.retain_history = retain;
  if (algo == "penalty") return run_penalty_class1(inst, constant_schedule(s.penalty), std::nullopt, o);
  if (algo == "alm") return run_alm_class1(inst, s.penalty, s.dual_step, std::nullopt, o);
  if (algo == "ladmm") {
    o.sp_residual_until = 1 + inst.m() * (inst.dbar() - 2) / 3;
    return run_ladmm_class2(inst, s.penalty, std::nullopt, o);
  }
  throw std::invalid_argument("unknown algorithm '" + algo + "' (expected penalty, alm or ladmm)");
}

int cmd_verify(const Settings& s) {
  Instance probe(s.params);  // reject bad configs before any suite runs
  const auto results = suites::run_all(s.params, s.seed);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    std::printf("criterion %2d %s  %-40s %.2fs\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(),
                r.seconds);
    for (const auto& c : r.checks) {
      if (!c.pass) std::printf("    failed: %s (%s)\n", c.name.c_str(), c.detail.c_str());
    }
  }
  if (!s.out.empty()) {
    const auto path = out_file(s, "verify", ".json");
    write_file(path, suites::report_json(results));
    std::printf("report: %s\n", path.string().c_str());
  }
  std::printf("%s\n", all ? "all criteria passed" : "some criteria failed");
  return all ? 0 : 1;
}

int cmd_run(const Settings& s) {
  const Instance inst(s.params);
  constexpr std::size_t kVerifyLimit = 30000;
  const bool retain = s.max_oracles <= kVerifyLimit;
  RunTrace tr = run_algorithm(inst, s, s.algo, retain);
  std::string verdict = "skipped (run longer than the verification limit)";
  bool verified = true;
  if (retain) {
    const SpanReport rep = tr.verify(inst);
    tr.attach(rep);
    verified = rep.pass;
    verdict = rep.pass ? "PASS" : "FAIL";
  }

  const double eps = inst.eps();
  const int divisor = tr.class_id == 1 ? 6 : 3;
  const double m = static_cast<double>(inst.m());
  const double support_threshold = 2.0 + m * (static_cast<double>(inst.dbar()) - 2.0) / divisor;

  json j;
  j["algorithm"] = tr.algorithm;
  j["class"] = tr.class_id;
  json hp = json::object();
  for (const auto& [k, v] : tr.hyperparameters) hp[k] = v;
  j["hyperparameters"] = hp;
  j["params"] = json::parse(s.params.to_json());
  j["max_oracles"] = s.max_oracles;
  j["oracle_calls"] = tr.transcript.count();
  j["iterations"] = tr.rows.size() - 1;
  j["residual_AP_initial"] = tr.rows.front().residual_ap;
  j["certificate_lb_initial"] = tr.rows.front().certificate_lb;
  j["residual_AP_final"] = tr.rows.back().residual_ap;

  json to_eps = "not reached";
  for (const TraceRow& r : tr.rows) {
    if (r.residual_ap <= eps) {
      to_eps = r.oracle_count;
      break;
    }
  }
  j["oracles_to_eps"] = to_eps;

  // Leading iterates whose certificate exceeds eps are provably not
  // eps-stationary.
  std::size_t certified = 0;
  while (certified < tr.rows.size() && tr.rows[certified].certificate_lb > eps) ++certified;
  const bool censored = certified == tr.rows.size();
  const bool holds = static_cast<double>(certified) >= support_threshold || censored;
  j["min_nonstationary_iterations"] = certified;
  j["min_nonstationary_censored"] = censored;
  j["support_threshold"] = support_threshold;
  j["support_threshold_holds"] = holds;
  j["front_rate_violations"] = front_rate_violations(tr.transcript.fronts, inst.m(), divisor);

  const json bounds = json::parse(suites::bounds_json(inst));
  const char* key = tr.class_id == 1 ? "class1_constrained" : "class2_splitting";
  j["theorem_threshold"] = bounds["thresholds"][key];
  j["theorem_threshold_note"] = "computed with Delta_F0 upper estimate";
  j["class_verifier"] = verdict;

  const auto csv = out_file(s, "run", ".csv");
  const auto sum = out_file(s, "run", ".json");
  const auto jsonl = out_file(s, "run", ".transcript.jsonl");
  write_file(csv, tr.to_csv());
  write_file(sum, j.dump(2) + "\n");
  write_file(jsonl, tr.transcript.to_jsonl());
  std::cout << j.dump(2) << "\n";
  std::printf("wrote %s, %s, %s\n", csv.string().c_str(), sum.string().c_str(),
              jsonl.string().c_str());
  const bool ok = verified && holds && j["front_rate_violations"].get<std::size_t>() == 0;
  return ok ? 0 : 1;
}

int cmd_frontplot(const Settings& s) {
  const Instance inst(s.params);
  std::vector<std::string> algos;
  if (s.algo == "all") {
    algos = {"penalty", "alm", "ladmm"};
  } else {
    algos = {s.algo};
  }
  std::ostringstream csv;
  csv << "series,t,J\n";
  std::size_t horizon = 0;
  bool ok = true;
  for (const std::string& a : algos) {
    const RunTrace tr = run_algorithm(inst, s, a, false);
    const int divisor = tr.class_id == 1 ? 6 : 3;
    for (const TraceRow& r : tr.rows) {
      csv << a << ',' << r.t << ',' << r.front << '\n';
      if (r.front > front_staircase(r.t, inst.m(), inst.dbar(), divisor)) ok = false;
    }
    horizon = std::max(horizon, tr.rows.size());
  }
  for (int divisor : {6, 3}) {
    const std::string name = divisor == 6 ? "staircase_class1" : "staircase_class2";
    for (std::size_t t = 0; t < horizon; ++t) {
      csv << name << ',' << t << ',' << front_staircase(t, inst.m(), inst.dbar(), divisor) << '\n';
    }
  }
  const auto path = out_file(s, "frontplot", ".csv");
  write_file(path, csv.str());
  std::printf("wrote %s\n%s\n", path.string().c_str(),
              ok ? "measured fronts stay under the staircase" : "front above the staircase");
  return ok ? 0 : 1;
}

int cmd_bounds(const Settings& s) {
  const Instance inst(s.params);
  const std::string text = suites::bounds_json(inst);
  std::cout << text;
  if (!s.out.empty()) write_file(out_file(s, "bounds", ".json"), text);
  const json j = json::parse(text);
  return j["kappa_ratio_holds"].get<bool>() && j["kappa_joint_bounds"]["holds"].get<bool>() ? 0
                                                                                            : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower-bound instance harness"};
  app.require_subcommand(1);
  Flags f;
  auto add_flags = [&f](CLI::App* c) {
    c->add_option("--m1", f.m1, "Blocks per group (>= 2)");
    c->add_option("--m2", f.m2, "Group count parameter (>= 1)");
    c->add_option("--dbar", f.dbar, "Block width (odd, >= 5)");
    c->add_option("--eps", f.eps, "Target accuracy");
    c->add_option("--lf", f.lf, "Smoothness constant");
    c->add_option("--beta", f.beta, "Weight of the nonsmooth term");
    c->add_option("--algo", f.algo, "penalty | alm | ladmm (frontplot also accepts all)");
    c->add_option("--max-oracles", f.max_oracles, "Oracle budget per run");
    c->add_option("--out", f.out, "Output directory");
    c->add_option("--config", f.config, "JSON config file; flags override it");
    c->add_option("--seed", f.seed, "Seed for the randomized suites");
  };
  CLI::App* verify = app.add_subcommand("verify", "Run every property suite");
  CLI::App* run = app.add_subcommand("run", "Run one algorithm and write its trace");
  CLI::App* frontplot = app.add_subcommand("frontplot", "Support-front traces and staircases");
  CLI::App* bounds = app.add_subcommand("bounds", "Condition numbers and thresholds");
  for (CLI::App* c : {verify, run, frontplot, bounds}) add_flags(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    Settings s = resolve(f);
    if (frontplot->parsed() && !f.algo && !f.config) s.algo = "all";
    if (verify->parsed()) return cmd_verify(s);
    if (run->parsed()) return cmd_run(s);
    if (frontplot->parsed()) return cmd_frontplot(s);
    return cmd_bounds(s);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
