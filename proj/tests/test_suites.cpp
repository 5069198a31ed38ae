// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "zerochain/suites.hpp"

using namespace zerochain;
using json = nlohmann::json;

TEST_SUITE("suites") {
  TEST_CASE("bounds table at the default configuration") {
    const Instance inst(zctest::c0());
    const std::string text = suites::bounds_json(inst);
    CHECK(text == suites::bounds_json(Instance(zctest::c0())));
    const json j = json::parse(text);
    CHECK(j.at("kappa_joint").get<double>() == doctest::Approx(7.5958).epsilon(1e-4));
    CHECK(j.at("kappa_ratio").get<double>() >= 1.5);
    CHECK(j.at("kappa_ratio_bound").get<double>() == 1.5);
    CHECK(j.at("kappa_ratio_holds").get<bool>());
    CHECK(j.at("kappa_joint_bounds").at("lower").get<double>() == 3.0);
    CHECK(j.at("kappa_joint_bounds").at("upper").get<double>() == 12.0);
    CHECK(j.at("kappa_joint_bounds").at("holds").get<bool>());
    CHECK(j.at("omega_bound").get<double>() == doctest::Approx(15.0 * std::numbers::pi));
    CHECK(j.at("support_propagation").at("class1").at("iterations").get<double>() == 8.0);
    CHECK(j.at("support_propagation").at("class2").at("iterations").get<double>() == 14.0);
    CHECK(j.at("support_propagation").at("class1").at("nonstationary_through_t").get<int>() == 7);
    CHECK(j.at("support_propagation").at("class2").at("nonstationary_through_t").get<int>() == 13);
    CHECK(j.at("threshold_note").get<std::string>().find("upper estimate") != std::string::npos);
    const double delta = j.at("delta_f0_upper").get<double>();
    for (const char* key : {"class1_constrained", "class2_splitting", "class2_near_stationary"}) {
      const json& t = j.at("thresholds").at(key);
      CHECK(t.at("oracle_calls").get<double>() ==
            std::ceil(t.at("coefficient").get<double>() * delta));
    }
  }

  TEST_CASE("threshold coefficients scale as eps^-2") {
    InstanceParams p = zctest::c0();
    p.eps = 0.05;
    const json half = json::parse(suites::bounds_json(Instance(p)));
    const json full = json::parse(suites::bounds_json(Instance(zctest::c0())));
    for (const char* key : {"class1_constrained", "class2_splitting", "class2_near_stationary"}) {
      CHECK(half["thresholds"][key]["coefficient"].get<double>() ==
            doctest::Approx(4.0 * full["thresholds"][key]["coefficient"].get<double>()).epsilon(1e-14));
    }
  }

  TEST_CASE("criterion runner") {
    const suites::CriterionResult r = suites::run_criterion(1, zctest::c0());
    CHECK(r.pass);
    CHECK(r.id == 1);
    CHECK_FALSE(r.checks.empty());
    const json j = json::parse(suites::report_json({r}));
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("criteria").at(0).at("checks").size() == r.checks.size());
    CHECK_THROWS_AS(suites::run_criterion(0, zctest::c0()), std::out_of_range);
    CHECK_THROWS_AS(suites::run_criterion(11, zctest::c0()), std::out_of_range);
  }

  TEST_CASE("suite failures are reported, not thrown") {
    // A configuration too large for the dense checks fails criterion 1 cleanly.
    const suites::CriterionResult r = suites::run_criterion(1, zctest::sized(2, 70));
    CHECK_FALSE(r.pass);
  }
}
