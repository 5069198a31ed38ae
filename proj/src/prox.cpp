// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace zerochain::prox {
namespace {

void require_positive(double eta, const char* who) {
  if (!(eta > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": eta must be positive, got " +
                                std::to_string(eta));
  }
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::pair<double, double> two_point(double a, double b, double c) {
  if (std::abs(a - b) <= 2.0 * c) {
    const double mid = 0.5 * (a + b);
    return {mid, mid};
  }
  if (a > b) return {a - c, b + c};
  return {a + c, b - c};
}

double soft_threshold(double y, double c) {
  const double mag = std::abs(y) - c;
  if (mag <= 0.0) return 0.0;
  return sign_of(y) * mag;
}

BlockVector prox_g(const Instance& inst, const BlockVector& x, double eta) {
  require_positive(eta, "prox_g");
  const Layout& l = inst.layout();
  if (x.num_blocks() != l.m || x.width() != l.dbar) {
    throw std::invalid_argument("prox_g: x has the wrong shape");
  }
  const double c = eta * inst.beta();
  BlockVector out = x;
  for (std::size_t k : l.rows_m) {
    auto lo = out.block(k - 1);
    auto hi = out.block(k);
    for (std::size_t j = 0; j < l.dbar; ++j) {
      const auto [p, q] = two_point(lo[j], hi[j], c);
      lo[j] = p;
      hi[j] = q;
    }
  }
  return out;
}

YVector prox_gbar(const Instance& inst, const YVector& y, double eta) {
  require_positive(eta, "prox_gbar");
  const Layout& l = inst.layout();
  if (y.num_blocks() != l.rows_m.size() || y.width() != l.dbar) {
    throw std::invalid_argument("prox_gbar: y has the wrong shape");
  }
  const double c = eta * inst.gbar_weight();
  YVector out = y;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = soft_threshold(out[k], c);
  return out;
}

double check_g(const Instance& inst, const BlockVector& x, const BlockVector& z,
               double eta) {
  require_positive(eta, "check_g");
  const Layout& l = inst.layout();
  const double beta = inst.beta();
  double sq = 0.0;
  std::vector<bool> paired(l.m, false);
  for (std::size_t k : l.rows_m) {
    paired[k - 1] = paired[k] = true;
    for (std::size_t j = 0; j < l.dbar; ++j) {
      const double a = z.at(k - 1, j);
      const double b = z.at(k, j);
      const double p = (a - x.at(k - 1, j)) / eta;
      const double q = (b - x.at(k, j)) / eta;
      // Subgradient of beta |b - a| is (-beta s, beta s), s in sign(b - a).
      double s = sign_of(b - a);
      if (b == a) s = std::clamp((p - q) / (2.0 * beta), -1.0, 1.0);
      const double ra = p - beta * s;
      const double rb = q + beta * s;
      sq += ra * ra + rb * rb;
    }
  }
  for (std::size_t i = 0; i < l.m; ++i) {
    if (paired[i]) continue;
    for (std::size_t j = 0; j < l.dbar; ++j) {
      const double r = (z.at(i, j) - x.at(i, j)) / eta;
      sq += r * r;
    }
  }
  return std::sqrt(sq);
}

double check_gbar(const Instance& inst, const YVector& y, const YVector& z, double eta) {
  require_positive(eta, "check_gbar");
  const double w = inst.gbar_weight();
  double sq = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double p = (z[k] - y[k]) / eta;
    double s = sign_of(z[k]);
    if (z[k] == 0.0) s = std::clamp(-p / w, -1.0, 1.0);
    const double r = p + w * s;
    sq += r * r;
  }
  return std::sqrt(sq);
}

}  // namespace zerochain::prox
