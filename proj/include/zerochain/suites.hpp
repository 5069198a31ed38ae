// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zerochain/instance.hpp"
#include "zerochain/params.hpp"

namespace zerochain::suites {

struct Check {
  std::string name;
  bool pass = false;
  /// Margin by which the check held (negative when it failed), in the
  /// check's own units.
  double slack = 0.0;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::vector<Check> checks;
};

constexpr int kNumCriteria = 10;

/// Runs one numbered property suite (1..10) around the base configuration.
/// Suites that sweep (m1, m2) keep eps, lf and dbar from `base`.
CriterionResult run_criterion(int id, const InstanceParams& base,
                              std::uint64_t seed = 20260101);

std::vector<CriterionResult> run_all(const InstanceParams& base,
                                     std::uint64_t seed = 20260101);

std::string report_json(const std::vector<CriterionResult>& results);

/// Condition numbers, lower-bound thresholds (with the Delta upper estimate),
/// the omega bound and the support-propagation thresholds, recomputed on
/// every call. Pretty-printed JSON with a fixed key order.
std::string bounds_json(const Instance& inst);

}  // namespace zerochain::suites
