// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zerochain/block_vector.hpp"
#include "zerochain/instance.hpp"

namespace zerochain {

enum class Problem { P, SP, AP };
std::string_view problem_name(Problem p);

struct Component {
  std::string name;
  double value = 0.0;
};

struct StationarityReport {
  Problem problem = Problem::AP;
  std::vector<Component> components;
  Vec gamma;  // multiplier of A x = 0 (P)
  Vec z1;     // multiplier of y = Abar x (SP)
  Vec z2;     // multiplier of A x = 0 (SP)
  double residual = 0.0;  // max of components
  /// Certified lower value of the exact min-max residual. Equals `residual`
  /// for AP and P; for SP it is max(sqrt(inner objective), feasibility terms).
  double residual_lower = 0.0;
  double certificate_lb = 0.0;
  bool approximate = false;  // inner solver hit its iteration cap
  bool sqrt2_relaxation = false;  // SP: sum-of-squares inner problem
  std::size_t inner_iterations = 0;
  double inner_kkt = 0.0;
  /// Full inner-solver point, usable as InnerOptions::warm_start next time.
  Vec inner_solution;

  /// Throws std::out_of_range for an unknown component name.
  double component(std::string_view name) const;
  std::string to_json() const;
};

struct InnerOptions {
  double tol = 1e-9;
  std::size_t max_iter = 100000;
  /// Starting point for the inner solver; ignored unless its length matches.
  Vec warm_start;
};

/// Problem min 1/2 ||r + B w||^2 + 1/2 ||C w||^2 over a box lo <= w <= hi
/// (infinite bounds allowed), solved by FISTA with adaptive restart.
struct BoxLsProblem {
  std::size_t dim = 0;
  Vec lo;
  Vec hi;
  /// grad(w) must return the full gradient; value(w) the objective.
  std::function<Vec(std::span<const double>)> grad;
  std::function<double(std::span<const double>)> value;
  double lipschitz = 1.0;
};

struct BoxLsResult {
  Vec w;
  std::size_t iterations = 0;
  double kkt = 0.0;  // ||w - P(w - grad(w))||
  bool converged = false;
};

/// Starts from the projection of `w0` (or 0) and stops once the projected
/// gradient norm is <= tol.
BoxLsResult solve_box_ls(const BoxLsProblem& prob, const InnerOptions& opts,
                         std::span<const double> w0 = {});

/// max{||H x||, (1/sqrt m) ||sum_i grad f_i(x_i)||}; no inner solve.
StationarityReport residual_AP(const Instance& inst, const BlockVector& x);

/// max{min_{gamma, u} ||grad f0 + A^T gamma + Abar^T u||, ||A x||} where u
/// ranges over the subdifferential box of gbar at Abar x.
StationarityReport residual_P(const Instance& inst, const BlockVector& x,
                              const InnerOptions& opts = {});

/// Four components of the splitting residual evaluated at the minimizer of
/// ||grad f0 + Abar^T z1 + A^T z2||^2 + dist^2(z1, dgbar(y)).
StationarityReport residual_SP(const Instance& inst, const BlockVector& x,
                               const YVector& y, const InnerOptions& opts = {});

/// (sqrt m / 2) || (1/m) sum_i grad f_i(xbar) || with xbar the block average.
double certificate_lb(const Instance& inst, const BlockVector& x);

/// Smallest 1-based j with |xbar_j| < 150 pi eps / (sqrt m L_f), if any.
std::optional<std::size_t> small_coordinate_witness(const Instance& inst,
                                                    const BlockVector& x);

}  // namespace zerochain
