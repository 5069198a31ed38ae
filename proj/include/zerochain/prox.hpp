// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "zerochain/block_vector.hpp"
#include "zerochain/instance.hpp"

namespace zerochain::prox {

/// argmin_{z1,z2} 1/2 (z1-a)^2 + 1/2 (z2-b)^2 + c |z1 - z2|.
/// The tie |a - b| = 2c takes the averaging branch.
std::pair<double, double> two_point(double a, double b, double c);

/// sign(y) (|y| - c)_+ ; |y| = c maps to 0.
double soft_threshold(double y, double c);

/// prox of eta * g. Pairs (i, i+1), i in M, are updated coordinatewise by
/// two_point with c = eta * beta; every other block is copied.
/// Throws std::invalid_argument for eta <= 0.
BlockVector prox_g(const Instance& inst, const BlockVector& x, double eta);

/// prox of eta * gbar: coordinatewise soft threshold at eta * beta / (m L_f).
YVector prox_gbar(const Instance& inst, const YVector& y, double eta);

/// dist(0, dg(z) + (z - x) / eta) for a candidate z = prox_g(x). Uses the box
/// description of the l1 subdifferential; <= 1e-10 certifies the output.
double check_g(const Instance& inst, const BlockVector& x, const BlockVector& z,
               double eta);

/// Same optimality residual for prox_gbar.
double check_gbar(const Instance& inst, const YVector& y, const YVector& z,
                  double eta);

}  // namespace zerochain::prox
