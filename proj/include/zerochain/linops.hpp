// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "zerochain/block_vector.hpp"
#include "zerochain/params.hpp"

namespace zerochain {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace linops {

/// The chain-difference family. H = m L_f (J_m kron I), A and Abar select
/// its row blocks indexed by M^c and M.
enum class OperatorTag {
  A,
  Abar,
  H,
  A_adj,
  Abar_adj,
  H_adj,
  AtA,
  AbarTAbar,
  HtH,
  AAt,
  AbarAbarT,
};

std::string_view name(OperatorTag tag);
OperatorTag adjoint(OperatorTag tag);
std::size_t in_dim(const Layout& layout, OperatorTag tag);
std::size_t out_dim(const Layout& layout, OperatorTag tag);

/// Matrix-free application. Throws std::invalid_argument on a length
/// mismatch. A difference of two exact zeros stays an exact zero.
Vec apply(const Layout& layout, OperatorTag tag, std::span<const double> v);

struct PowerOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
};

struct PowerResult {
  double value = 0.0;  // dominant eigenvalue of the iterated operator
  std::size_t iterations = 0;
  double residual = 0.0;  // ||G v - value v|| / value at exit
};

/// Deterministic start vector: all ones perturbed by a fixed LCG stream.
Vec power_start(std::size_t dim);

/// Power iteration for the dominant eigenvalue of a symmetric PSD operator.
/// Stops once ||G v - lambda v|| <= tol * lambda. Throws ConvergenceError
/// after max_iter iterations.
PowerResult power_iteration(const std::function<Vec(std::span<const double>)>& gram,
                            std::size_t dim, const PowerOptions& opts = {});

/// Largest singular value of `tag` by power iteration on its Gram operator.
double opnorm(const Layout& layout, OperatorTag tag, const PowerOptions& opts = {});

/// Closed-form eigenvalue 4 m^2 L_f^2 sin^2(i pi / (6 m1 m2)) of the
/// (m-1) x (m-1) chain Gram; each appears dbar times in H H^T.
/// Requires 1 <= i <= m-1.
double eig_HHT(const Layout& layout, std::size_t i);

/// kappa([Abar; A]) = kappa(H) = sin((3 m1 m2 - 1) pi / (6 m1 m2)) / sin(pi / (6 m1 m2)).
double kappa_joint(const Layout& layout);

/// Numerical kappa(A) = sqrt(lambda_max(A A^T) / lambda_min^+(A A^T)).
/// lambda_min uses the diagonal structure when m1 = 2 and inverse iteration
/// with inner conjugate-gradient solves otherwise (tolerance 1e-9).
double kappa_A(const Layout& layout);

/// Projection onto Null(H) = {1_m kron u}: every block becomes the block average.
BlockVector null_project_H(const BlockVector& v);

/// Block average (1/m) sum_i x_i, summed in ascending block order.
Vec block_average(const BlockVector& v);

}  // namespace linops
}  // namespace zerochain
