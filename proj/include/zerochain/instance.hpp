// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "zerochain/block_vector.hpp"
#include "zerochain/params.hpp"

namespace zerochain {

// Scalar building blocks. psi and psi_prime return a literal 0.0 for u <= 0.
double psi(double u);
double psi_prime(double u);
double phi(double v);
double phi_prime(double v);

/// The three block regimes: i in [1, m/3], [m/3+1, 2m/3], [2m/3+1, m].
enum class Regime { First, Middle, Last };

/// The hard instance: f0(x) = sum_i f_i(x_i), g(x) = beta sum_{i in M}
/// ||x_i - x_{i+1}||_1 = gbar(Abar x), constraint A x = 0.
///
/// Immutable after construction and safe to share across threads. Block
/// arguments named `i` of h/f/grad_h/grad_f are 1-based (1 <= i <= m).
class Instance {
 public:
  /// Validates the parameters, resolves the default beta, and rejects an
  /// explicit beta at or below (50 pi + 1 + ||A||) sqrt(m) eps.
  explicit Instance(const InstanceParams& params);

  const InstanceParams& params() const { return params_; }
  const Layout& layout() const { return layout_; }
  double beta() const { return beta_; }
  double eps() const { return params_.eps; }
  double lf() const { return params_.lf; }
  std::size_t m() const { return layout_.m; }
  std::size_t dbar() const { return layout_.dbar; }

  /// ||A|| from power iteration, computed once at construction.
  double norm_A() const { return norm_a_; }
  /// ||H|| from power iteration, computed once at construction.
  double norm_H() const { return norm_h_; }
  /// (50 pi + 1 + ||A||) sqrt(m) eps; beta must exceed it.
  double beta_threshold() const { return beta_threshold_; }

  Regime regime(std::size_t i) const;

  double h(std::size_t i, std::span<const double> z) const;
  Vec grad_h(std::size_t i, std::span<const double> z) const;

  double f(std::size_t i, std::span<const double> z) const;
  Vec grad_f(std::size_t i, std::span<const double> z) const;

  double f0(const BlockVector& x) const;
  BlockVector grad_f0(const BlockVector& x) const;

  double g_val(const BlockVector& x) const;
  double gbar_val(const YVector& y) const;
  /// F0 = f0 + g.
  double objective(const BlockVector& x) const { return f0(x) + g_val(x); }

  /// 3000 pi^2 dbar eps^2 / L_f, the upper estimate of f0(0) - inf f0.
  double delta_f0_upper() const;

  /// Scaling sqrt(m) L_f / (150 pi eps) mapping block coordinates to h's argument.
  double arg_scale() const { return arg_scale_; }
  /// Threshold 150 pi eps / (sqrt(m) L_f) below which a block-average
  /// coordinate certifies non-stationarity.
  double small_coordinate_threshold() const { return 1.0 / arg_scale_; }
  /// Soft-threshold weight beta / (m L_f) of gbar.
  double gbar_weight() const { return beta_ / layout_.scale(); }

  BlockVector zeros_x() const { return BlockVector(layout_.m, layout_.dbar); }
  YVector zeros_y() const {
    return YVector(layout_.rows_m.size(), layout_.dbar);
  }

 private:
  InstanceParams params_;
  Layout layout_;
  double norm_a_ = 0.0;
  double norm_h_ = 0.0;
  double beta_threshold_ = 0.0;
  double beta_ = 0.0;
  double arg_scale_ = 0.0;
};

}  // namespace zerochain
