// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/instance.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "zerochain/linops.hpp"

namespace zerochain {

using std::numbers::pi;

double psi(double u) {
  if (u <= 0.0) return 0.0;
  // expm1 keeps 1 - e^{-u^2} accurate (and nonzero) for tiny u.
  return -std::expm1(-u * u);
}

double psi_prime(double u) {
  if (u <= 0.0) return 0.0;
  return 2.0 * u * std::exp(-u * u);
}

double phi(double v) { return 4.0 * std::atan(v) + 2.0 * pi; }

double phi_prime(double v) { return 4.0 / (1.0 + v * v); }

namespace {

const double kPsiOne = psi(1.0);

// phi(z, j) with 1-based j.
double chain_term(std::span<const double> z, std::size_t j) {
  if (j == 1) return -kPsiOne * phi(z[0]);
  const double a = z[j - 2];
  const double b = z[j - 1];
  return psi(-a) * phi(-b) - psi(a) * phi(b);
}

// d phi(z, j) / d z_{j-1} and d phi(z, j) / d z_j for j >= 2.
double d_prev(double a, double b) { return -psi_prime(-a) * phi(-b) - psi_prime(a) * phi(b); }
double d_curr(double a, double b) { return -psi(-a) * phi_prime(-b) - psi(a) * phi_prime(b); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Instance::Instance(const InstanceParams& params)
    : params_(params), layout_(Layout::from(params)) {
  norm_a_ = linops::opnorm(layout_, linops::OperatorTag::A);
  norm_h_ = linops::opnorm(layout_, linops::OperatorTag::H);
  const double sqrt_m = std::sqrt(static_cast<double>(layout_.m));
  beta_threshold_ = (50.0 * pi + 1.0 + norm_a_) * sqrt_m * params_.eps;
  if (params_.beta) {
    if (!(*params_.beta > beta_threshold_)) {
      throw std::invalid_argument("beta = " + fmt(*params_.beta) +
                                  " must exceed (50 pi + 1 + ||A||) sqrt(m) eps = " +
                                  fmt(beta_threshold_));
    }
    beta_ = *params_.beta;
  } else {
    beta_ = 1.05 * beta_threshold_;
  }
  arg_scale_ = sqrt_m * params_.lf / (150.0 * pi * params_.eps);
}

Regime Instance::regime(std::size_t i) const {
  if (i < 1 || i > layout_.m) {
    throw std::out_of_range("block index " + std::to_string(i) + " outside [1, " +
                            std::to_string(layout_.m) + "]");
  }
  const std::size_t third = layout_.m / 3;
  if (i <= third) return Regime::First;
  if (i <= 2 * third) return Regime::Middle;
  return Regime::Last;
}

double Instance::h(std::size_t i, std::span<const double> z) const {
  const Regime r = regime(i);
  const std::size_t d = layout_.dbar;
  if (z.size() != d) throw std::invalid_argument("h: z must have length dbar");
  double val = chain_term(z, 1);
  if (r == Regime::Middle) return val;
  const std::size_t offset = (r == Regime::First) ? 0 : 1;
  double sum = 0.0;
  for (std::size_t j = 1; j <= d / 2; ++j) sum += chain_term(z, 2 * j + offset);
  return val + 3.0 * sum;
}

Vec Instance::grad_h(std::size_t i, std::span<const double> z) const {
  const Regime r = regime(i);
  const std::size_t d = layout_.dbar;
  if (z.size() != d) throw std::invalid_argument("grad_h: z must have length dbar");
  Vec g(d, 0.0);
  g[0] = -kPsiOne * phi_prime(z[0]);
  if (r == Regime::Middle) return g;
  if (r == Regime::First) {
    // Terms phi(z, 2j) couple (z_{2j-1}, z_{2j}), j = 1..floor(d/2).
    for (std::size_t j = 2; j <= d; j += 2) {
      g[j - 2] += 3.0 * d_prev(z[j - 2], z[j - 1]);
      g[j - 1] += 3.0 * d_curr(z[j - 2], z[j - 1]);
    }
  } else {
    // Terms phi(z, 2j+1) couple (z_{2j}, z_{2j+1}).
    for (std::size_t j = 3; j <= d; j += 2) {
      g[j - 2] += 3.0 * d_prev(z[j - 2], z[j - 1]);
      g[j - 1] += 3.0 * d_curr(z[j - 2], z[j - 1]);
    }
  }
  return g;
}

double Instance::f(std::size_t i, std::span<const double> z) const {
  Vec w(z.begin(), z.end());
  for (double& v : w) v *= arg_scale_;
  const double m = static_cast<double>(layout_.m);
  return 300.0 * pi * params_.eps * params_.eps / (m * params_.lf) * h(i, w);
}

Vec Instance::grad_f(std::size_t i, std::span<const double> z) const {
  Vec w(z.begin(), z.end());
  for (double& v : w) v *= arg_scale_;
  Vec g = grad_h(i, w);
  const double c = 2.0 * params_.eps / std::sqrt(static_cast<double>(layout_.m));
  for (double& v : g) v *= c;
  return g;
}

double Instance::f0(const BlockVector& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < layout_.m; ++i) s += f(i + 1, x.block(i));
  return s;
}

BlockVector Instance::grad_f0(const BlockVector& x) const {
  if (x.num_blocks() != layout_.m || x.width() != layout_.dbar) {
    throw std::invalid_argument("grad_f0: x has the wrong shape");
  }
  BlockVector out(layout_.m, layout_.dbar);
  for (std::size_t i = 0; i < layout_.m; ++i) {
    const Vec g = grad_f(i + 1, x.block(i));
    auto b = out.block(i);
    for (std::size_t j = 0; j < layout_.dbar; ++j) b[j] = g[j];
  }
  return out;
}

double Instance::g_val(const BlockVector& x) const {
  double s = 0.0;
  for (std::size_t k : layout_.rows_m) {
    auto a = x.block(k - 1);
    auto b = x.block(k);
    for (std::size_t j = 0; j < layout_.dbar; ++j) s += std::abs(a[j] - b[j]);
  }
  return beta_ * s;
}

double Instance::gbar_val(const YVector& y) const { return gbar_weight() * norm1(y); }

double Instance::delta_f0_upper() const {
  return 3000.0 * pi * pi * static_cast<double>(layout_.dbar) * params_.eps * params_.eps /
         params_.lf;
}

}  // namespace zerochain
