// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zerochain/block_vector.hpp"
#include "zerochain/instance.hpp"

namespace zerochain {

struct OracleBundle1 {
  BlockVector grad_f0;
  Vec a_x;
  BlockVector at_z;
  BlockVector prox_g;
};

struct OracleBundle2 {
  BlockVector grad_f0;
  YVector abar_x;
  Vec a_x;
  BlockVector abar_t_y;
  BlockVector at_z;
  YVector prox_gbar;
};

struct OracleCall {
  std::size_t t = 0;  // iterate index current when the call was made
  int kind = 1;       // 1 or 2
  std::uint64_t digest = 0;
  double eta = 0.0;
};

/// Ordered log of oracle calls plus per-iterate support fronts and span
/// residuals. `span_residuals[t]` is NaN until a verifier fills it in.
struct OracleTranscript {
  std::vector<OracleCall> calls;
  std::vector<int> fronts;
  std::vector<double> span_residuals;

  std::size_t count() const { return calls.size(); }
  /// JSON lines, one record per call: {t, kind, eta, J, span_residual}.
  std::string to_jsonl() const;
};

/// Largest 1-based coordinate index that is nonzero in any block; 0 for the
/// zero vector. The test is exact (value != 0.0).
int support_front(const BlockVector& x);
int support_front(const YVector& y);

/// Meters ORACLE_1 / ORACLE_2 for one run. Each call increments the count by
/// exactly one regardless of which components the caller uses.
class Oracle {
 public:
  explicit Oracle(const Instance& inst) : inst_(&inst) {}

  /// (grad f0(x), A x, A^T z, prox_{eta g}(x)).
  OracleBundle1 call1(const BlockVector& x, std::span<const double> z, double eta);
  /// (grad f0(x), Abar x, A x, Abar^T y, A^T z, prox_{eta gbar}(y)).
  OracleBundle2 call2(const BlockVector& x, const YVector& y,
                      std::span<const double> z, double eta);

  /// Records the support front of iterate t (called once per iterate).
  void record_iterate(int front);

  std::size_t count() const { return transcript_.count(); }
  const OracleTranscript& transcript() const { return transcript_; }
  OracleTranscript& transcript() { return transcript_; }
  const Instance& instance() const { return *inst_; }

 private:
  const Instance* inst_;
  OracleTranscript transcript_;
};

/// Incrementally built orthonormal basis (modified Gram-Schmidt with one
/// reorthogonalization pass). Candidates whose orthogonal remainder falls
/// below `drop_tol` times their norm are treated as already in the span.
class SpanBasis {
 public:
  explicit SpanBasis(std::size_t dim, double drop_tol = 1e-12)
      : dim_(dim), drop_tol_(drop_tol) {}

  void add(std::span<const double> v);
  /// ||v - P v|| with P the orthogonal projector onto the current span.
  double residual(std::span<const double> v) const;
  std::size_t rank() const { return basis_.size(); }
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  double drop_tol_;
  std::vector<Vec> basis_;
};

struct Class1Step {
  BlockVector xi;  // prox input
  double eta = 0.0;
  BlockVector x;  // the new iterate
};

struct Class1History {
  BlockVector x0;
  std::vector<Class1Step> steps;
  bool truncated = false;
};

struct Class2Step {
  BlockVector x;
  YVector xi;  // prox input for y
  double eta = 0.0;
  YVector y;
};

struct Class2History {
  BlockVector x0;
  YVector y0;
  std::vector<Class2Step> steps;
  bool truncated = false;
};

struct SpanReport {
  bool pass = true;
  /// residuals[t-1] is the largest span distance found at step t.
  std::vector<double> residuals;
  std::optional<std::size_t> first_failure;  // step index t (1-based)
  double max_residual = 0.0;
};

/// Certifies x^(t) in span{xi, prox_{eta g}(xi)} with
/// xi in span{x^(s), grad f0(x^(s)), A^T A x^(s)}_{s<t} (b = 0).
/// A step passes iff each distance <= rel_tol * (1 + ||target||).
/// Throws std::logic_error when the history is truncated.
SpanReport verify_class1(const Instance& inst, const Class1History& history,
                         double rel_tol = 1e-8);

/// Certifies the x- and y-span conditions of the ORACLE_2 class.
SpanReport verify_class2(const Instance& inst, const Class2History& history,
                         double rel_tol = 1e-8);

/// Number of iterates t with J(t) >= 2 and t < 2 + m (J - 2) / divisor,
/// where divisor is 6 for the ORACLE_1 class and 3 for the ORACLE_2 class.
std::size_t front_rate_violations(std::span<const int> fronts, std::size_t m,
                                  int divisor);

/// Theoretical staircase max{J : t >= 2 + m (J - 2) / divisor}, capped at dbar;
/// 0 at t = 0 and 1 at t = 1.
int front_staircase(std::size_t t, std::size_t m, std::size_t dbar, int divisor);

}  // namespace zerochain
