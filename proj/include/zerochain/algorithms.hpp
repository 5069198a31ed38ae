// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zerochain/block_vector.hpp"
#include "zerochain/instance.hpp"
#include "zerochain/oracle.hpp"

namespace zerochain {

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step-indexed positive parameter, evaluated at the iterate index t >= 0.
using Schedule = std::function<double(std::size_t)>;
Schedule constant_schedule(double value);

struct TraceRow {
  std::size_t t = 0;
  std::size_t oracle_count = 0;
  int front = 0;
  double residual_ap = 0.0;
  double certificate_lb = 0.0;
  double objective = 0.0;
  /// residual_SP of (x, y) for class-2 runs when requested, NaN otherwise.
  double residual_sp = std::numeric_limits<double>::quiet_NaN();
  /// Certified lower value of the same residual (see StationarityReport).
  double residual_sp_lower = std::numeric_limits<double>::quiet_NaN();
};

struct RunOptions {
  std::size_t max_oracles = 500;
  /// Keep the full iterate history so the class verifier can run.
  bool retain_history = true;
  /// Evaluate residual_SP for iterates t <= this bound (class 2 only).
  std::size_t sp_residual_until = 0;
  double divergence_limit = 1e12;
  /// Called with every iterate as it is recorded (y is null for class 1).
  std::function<void(std::size_t t, const BlockVector& x, const YVector* y)> observer;
};

/// One run of a method: a row per iterate (t = 0 included, with oracle
/// count 0), the oracle transcript, and the retained history.
struct RunTrace {
  std::string algorithm;
  int class_id = 1;
  std::vector<std::pair<std::string, double>> hyperparameters;
  std::vector<TraceRow> rows;
  OracleTranscript transcript;
  std::optional<Class1History> history1;
  std::optional<Class2History> history2;
  BlockVector x_final;
  YVector y_final;

  std::string to_csv() const;
  /// Runs the matching class verifier; throws when the history is missing.
  SpanReport verify(const Instance& inst) const;
  /// Copies per-step span residuals into the transcript (slot t for step t).
  void attach(const SpanReport& report);
};

/// x+ = prox_{eta g}(x - eta (grad f0(x) + rho A^T A x)), three ORACLE_1
/// calls per iterate. The default step is 1 / (L_f + rho ||A||^2).
RunTrace run_penalty_class1(const Instance& inst, const Schedule& rho,
                            const std::optional<Schedule>& eta,
                            const RunOptions& opts);

/// Linearized ALM keeping w = A^T z (z0 = 0):
/// x+ = prox_{eta g}(x - eta (grad f0 + w + penalty A^T A x)),
/// w+ = w + dual_step A^T A x.
RunTrace run_alm_class1(const Instance& inst, double penalty, double dual_step,
                        const std::optional<double>& eta, const RunOptions& opts);

/// Linearized ADMM on the splitting problem with a Jacobi sweep: the x step
/// uses the augmented Lagrangian gradient at (x, y), and y+ is
/// prox_{gbar / penalty}(Abar x + lambda / penalty). Default step
/// 1 / (L_f + penalty ||Abar||^2 + penalty ||A||^2).
RunTrace run_ladmm_class2(const Instance& inst, double penalty,
                          const std::optional<Schedule>& eta,
                          const RunOptions& opts);

/// What a generic class member sees before choosing iterate t: the unit-norm
/// nonzero generators permitted so far (x_gen for x or the class-1 xi,
/// y_gen for the class-2 y-side xi).
struct GenericContext {
  std::size_t t = 0;
  const std::vector<Vec>* x_gen = nullptr;
  const std::vector<Vec>* y_gen = nullptr;
  std::size_t d = 0;
  std::size_t nbar = 0;
  const BlockVector* x_current = nullptr;
  const YVector* y_current = nullptr;
};

struct GenericDecision {
  Vec x_coeffs;  // class 1: xi = sum c_k x_gen[k]; class 2: x itself
  Vec y_coeffs;  // class 2: xi = sum c_k y_gen[k]
  double a = 1.0;  // new point = a xi + b prox(xi)
  double b = 0.0;
  double eta = 1.0;
  /// Added to the new x after the span step. Only for adversarial tests.
  std::optional<Vec> inject_x;
};

using UpdateRule = std::function<GenericDecision(const GenericContext&)>;

/// Every x- and y- coefficient zero.
UpdateRule zero_rule();
/// Normal(0,1) coefficients, a, b in N(0,1), eta in [0.01, 2], from a
/// seeded mt19937_64.
UpdateRule random_rule(std::uint64_t seed);

/// Runs an arbitrary member of class 1 or 2 from zero. Class 1 spends three
/// ORACLE_1 calls per iterate, class 2 four ORACLE_2 calls.
RunTrace run_generic(const Instance& inst, int class_id, const UpdateRule& rule,
                     const RunOptions& opts);

}  // namespace zerochain
