// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace zerochain {

/// User-facing description of the hard instance. `beta == nullopt` selects
/// the default rule 1.05 * (50*pi + 1 + ||A||) * sqrt(m) * eps.
struct InstanceParams {
  double eps = 0.1;
  double lf = 1.0;
  int m1 = 2;
  int m2 = 2;
  int dbar = 5;
  std::optional<double> beta;

  /// Throws std::invalid_argument naming the first violated constraint.
  /// The beta lower bound needs ||A|| and is checked by Instance.
  void validate() const;

  std::string to_json() const;
  static InstanceParams from_json(const std::string& text);
  static InstanceParams from_file(const std::string& path);
};

/// Sizes and index sets derived from InstanceParams. Block indices in
/// `in_m` and the chain rows are 1-based as in the construction: chain row k
/// (1 <= k <= m-1) couples blocks k and k+1.
struct Layout {
  int m1 = 0;
  int m2 = 0;
  std::size_t m = 0;      // 3 * m1 * m2 blocks
  std::size_t dbar = 0;   // block width
  std::size_t d = 0;      // m * dbar
  std::size_t n = 0;      // (m - 3 m2) * dbar, rows of A
  std::size_t nbar = 0;   // (3 m2 - 1) * dbar, rows of Abar
  double lf = 1.0;

  /// Chain rows in M = {i*m1 : i = 1..3m2-1}, ascending.
  std::vector<std::size_t> rows_m;
  /// Chain rows in the complement {1..m-1} \ M, ascending.
  std::vector<std::size_t> rows_mc;
  /// in_m[k] is true iff chain row k belongs to M (index 0 unused).
  std::vector<bool> in_m;

  static Layout from(const InstanceParams& p);

  std::size_t h_rows() const { return (m - 1) * dbar; }
  /// Scale m * L_f carried by every chain difference.
  double scale() const { return static_cast<double>(m) * lf; }
};

}  // namespace zerochain
