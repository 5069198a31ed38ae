// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zerochain {

using Vec = std::vector<double>;

/// A dense vector stored as `num_blocks` contiguous segments of `width`
/// reals. Block indices are 0-based here; the instance functions that follow
/// the 1-based block numbering of the construction say so explicitly.
template <class Tag>
class Blocked {
 public:
  Blocked() = default;
  Blocked(std::size_t num_blocks, std::size_t width)
      : num_blocks_(num_blocks), width_(width), data_(num_blocks * width, 0.0) {}
  Blocked(std::size_t num_blocks, std::size_t width, Vec data)
      : num_blocks_(num_blocks), width_(width), data_(std::move(data)) {
    if (data_.size() != num_blocks_ * width_) {
      throw std::invalid_argument("Blocked: data length " +
                                  std::to_string(data_.size()) + " != " +
                                  std::to_string(num_blocks_ * width_));
    }
  }

  std::size_t num_blocks() const { return num_blocks_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> block(std::size_t i) {
    return {data_.data() + i * width_, width_};
  }
  std::span<const double> block(std::size_t i) const {
    return {data_.data() + i * width_, width_};
  }

  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }

  /// Coordinate j (0-based) of block i (0-based).
  double& at(std::size_t i, std::size_t j) { return data_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * width_ + j]; }

  const Vec& values() const { return data_; }
  Vec& values() { return data_; }

  operator std::span<const double>() const { return data_; }
  operator std::span<double>() { return data_; }

  bool operator==(const Blocked&) const = default;

 private:
  std::size_t num_blocks_ = 0;
  std::size_t width_ = 0;
  Vec data_;
};

/// A point x = (x_1, ..., x_m) of the primal space, m blocks of length dbar.
using BlockVector = Blocked<struct PrimalTag>;
/// A point of the splitting variable space, 3*m2 - 1 blocks of length dbar.
using YVector = Blocked<struct SplitTag>;

// Small dense helpers shared across modules. All reductions run in ascending
// index order so results are reproducible bit for bit.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
double norm1(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vec scaled(double alpha, std::span<const double> x);
Vec add(std::span<const double> a, std::span<const double> b);
Vec sub(std::span<const double> a, std::span<const double> b);

}  // namespace zerochain
