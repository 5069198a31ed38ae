// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <algorithm>

#include "zerochain/block_vector.hpp"
#include "zerochain/instance.hpp"
#include "zerochain/params.hpp"

namespace zctest {

inline zerochain::InstanceParams c0() { return zerochain::InstanceParams{}; }

inline zerochain::InstanceParams sized(int m1, int m2, int dbar = 5) {
  zerochain::InstanceParams p;
  p.m1 = m1;
  p.m2 = m2;
  p.dbar = dbar;
  return p;
}

inline zerochain::BlockVector random_x(const zerochain::Instance& inst, std::mt19937_64& rng,
                                       double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  zerochain::BlockVector x = inst.zeros_x();
  for (double& v : x.values()) v = u(rng);
  return x;
}

inline zerochain::YVector random_y(const zerochain::Instance& inst, std::mt19937_64& rng,
                                   double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  zerochain::YVector y = inst.zeros_y();
  for (double& v : y.values()) v = u(rng);
  return y;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace zctest
