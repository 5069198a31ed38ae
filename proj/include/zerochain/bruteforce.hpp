// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "zerochain/block_vector.hpp"
#include "zerochain/instance.hpp"
#include "zerochain/linops.hpp"

// Slow, dense, independent reference computations used to check the fast
// paths. Nothing here is on a hot path.
namespace zerochain::bruteforce {

/// Row-major dense matrix.
struct Dense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec data;

  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Vec multiply(std::span<const double> v) const;
  Dense transpose() const;
  Dense gram() const;  // M M^T
  std::string to_csv() const;
};

Dense identity(std::size_t n);

/// Materializes `tag` column by column from basis vectors. Throws
/// std::length_error when m * dbar > 2048.
Dense dense(const Layout& layout, linops::OperatorTag tag);

/// Ascending eigenvalues of a symmetric matrix by cyclic Jacobi rotations
/// (off-diagonal Frobenius norm <= tol * ||M||_F). Throws ConvergenceError
/// after 100 sweeps.
Vec eig_symmetric(const Dense& mat, double tol = 1e-11);

Vec eig_dense(const Layout& layout, linops::OperatorTag tag);

/// Central differences with step h.
Vec fd_grad(const std::function<double(std::span<const double>)>& fn,
            std::span<const double> point, double step = 1e-5);

/// argmin_z w/2 (z - y)^2 + c |z| by golden-section search on a bracket
/// refined to 1e-10 (plain weight w = 1).
double prox_abs_numeric(double y, double c);

/// argmin_{z1,z2} 1/2 (z1-a)^2 + 1/2 (z2-b)^2 + c |z1 - z2| numerically.
std::pair<double, double> prox_pair_numeric(double a, double b, double c);

enum class Which { G, Gbar };

/// Per-coordinate / per-pair numeric prox of eta g or eta gbar.
Vec prox_numeric(const Instance& inst, Which which, std::span<const double> point,
                 double eta);

/// Max ||G(x) - G(x')|| / ||x - x'|| over `trials` random pairs drawn with
/// coordinates uniform in [-scale, scale] (seeded mt19937_64).
double lipschitz_probe(const std::function<Vec(std::span<const double>)>& grad,
                       std::size_t dim, std::size_t trials, std::uint64_t seed,
                       double scale = 1.0);

/// Independent evaluation of h_i straight from the definition of phi.
double h_reference(const Instance& inst, std::size_t i, std::span<const double> z);

/// Dense projected coordinate descent for
/// min_{v, lo <= u <= hi} ||r + H^T v||, where the Abar rows of v are boxed.
/// Used to cross-check residual_P at desk scale.
double residual_P_dense(const Instance& inst, const BlockVector& x,
                        std::size_t sweeps = 20000);

}  // namespace zerochain::bruteforce
