// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/block_vector.hpp"

#include <cmath>

namespace zerochain {
namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch " +
                                std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(std::span<const double> a) {
  // Scaled accumulation so vectors with entries near the underflow limit
  // still report a nonzero norm.
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : a) {
    const double r = v / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

double norm_inf(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same(x.size(), y.size(), "axpy");
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

Vec scaled(double alpha, std::span<const double> x) {
  Vec out(x.begin(), x.end());
  for (double& v : out) v *= alpha;
  return out;
}

Vec add(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "add");
  Vec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

Vec sub(std::span<const double> a, std::span<const double> b) {
  require_same(a.size(), b.size(), "sub");
  Vec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

}  // namespace zerochain
