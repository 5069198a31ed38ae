// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/linops.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace zerochain::linops {
namespace {

using Rows = std::vector<std::size_t>;

std::vector<std::size_t> all_rows(const Layout& l) {
  std::vector<std::size_t> rows(l.m - 1);
  for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = k + 1;
  return rows;
}

// Chain rows k (1-based) applied to x: out block r = s (x_{k+1} - x_k).
Vec chain_rows(const Layout& l, const Rows& rows, std::span<const double> x) {
  const double s = l.scale();
  const std::size_t w = l.dbar;
  Vec out(rows.size() * w);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t lo = (rows[r] - 1) * w;  // block k, 0-based k-1
    const std::size_t hi = rows[r] * w;        // block k+1
    for (std::size_t j = 0; j < w; ++j) out[r * w + j] = s * (x[hi + j] - x[lo + j]);
  }
  return out;
}

// Transpose of chain_rows.
Vec chain_rows_adj(const Layout& l, const Rows& rows, std::span<const double> v) {
  const double s = l.scale();
  const std::size_t w = l.dbar;
  Vec out(l.d, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t lo = (rows[r] - 1) * w;
    const std::size_t hi = rows[r] * w;
    for (std::size_t j = 0; j < w; ++j) {
      const double val = v[r * w + j];
      if (val == 0.0) continue;  // keeps untouched coordinates exactly zero
      out[lo + j] -= s * val;
      out[hi + j] += s * val;
    }
  }
  return out;
}

void check_len(std::size_t got, std::size_t want, OperatorTag tag) {
  if (got != want) {
    throw std::invalid_argument("apply(" + std::string(name(tag)) + "): input length " +
                                std::to_string(got) + ", expected " + std::to_string(want));
  }
}

}  // namespace

std::string_view name(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::A: return "A";
    case OperatorTag::Abar: return "Abar";
    case OperatorTag::H: return "H";
    case OperatorTag::A_adj: return "A_adj";
    case OperatorTag::Abar_adj: return "Abar_adj";
    case OperatorTag::H_adj: return "H_adj";
    case OperatorTag::AtA: return "AtA";
    case OperatorTag::AbarTAbar: return "AbarTAbar";
    case OperatorTag::HtH: return "HtH";
    case OperatorTag::AAt: return "AAt";
    case OperatorTag::AbarAbarT: return "AbarAbarT";
  }
  return "?";
}

OperatorTag adjoint(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::A: return OperatorTag::A_adj;
    case OperatorTag::Abar: return OperatorTag::Abar_adj;
    case OperatorTag::H: return OperatorTag::H_adj;
    case OperatorTag::A_adj: return OperatorTag::A;
    case OperatorTag::Abar_adj: return OperatorTag::Abar;
    case OperatorTag::H_adj: return OperatorTag::H;
    default: return tag;  // Gram operators are symmetric
  }
}

std::size_t in_dim(const Layout& l, OperatorTag tag) {
  switch (tag) {
    case OperatorTag::A:
    case OperatorTag::Abar:
    case OperatorTag::H:
    case OperatorTag::AtA:
    case OperatorTag::AbarTAbar:
    case OperatorTag::HtH: return l.d;
    case OperatorTag::A_adj:
    case OperatorTag::AAt: return l.n;
    case OperatorTag::Abar_adj:
    case OperatorTag::AbarAbarT: return l.nbar;
    case OperatorTag::H_adj: return l.h_rows();
  }
  return 0;
}

std::size_t out_dim(const Layout& l, OperatorTag tag) {
  switch (tag) {
    case OperatorTag::A:
    case OperatorTag::AAt: return l.n;
    case OperatorTag::Abar:
    case OperatorTag::AbarAbarT: return l.nbar;
    case OperatorTag::H: return l.h_rows();
    default: return l.d;
  }
}

Vec apply(const Layout& l, OperatorTag tag, std::span<const double> v) {
  check_len(v.size(), in_dim(l, tag), tag);
  switch (tag) {
    case OperatorTag::A: return chain_rows(l, l.rows_mc, v);
    case OperatorTag::Abar: return chain_rows(l, l.rows_m, v);
    case OperatorTag::H: return chain_rows(l, all_rows(l), v);
    case OperatorTag::A_adj: return chain_rows_adj(l, l.rows_mc, v);
    case OperatorTag::Abar_adj: return chain_rows_adj(l, l.rows_m, v);
    case OperatorTag::H_adj: return chain_rows_adj(l, all_rows(l), v);
    case OperatorTag::AtA: return chain_rows_adj(l, l.rows_mc, chain_rows(l, l.rows_mc, v));
    case OperatorTag::AbarTAbar: return chain_rows_adj(l, l.rows_m, chain_rows(l, l.rows_m, v));
    case OperatorTag::HtH: {
      const Rows rows = all_rows(l);
      return chain_rows_adj(l, rows, chain_rows(l, rows, v));
    }
    case OperatorTag::AAt: return chain_rows(l, l.rows_mc, chain_rows_adj(l, l.rows_mc, v));
    case OperatorTag::AbarAbarT: return chain_rows(l, l.rows_m, chain_rows_adj(l, l.rows_m, v));
  }
  throw std::logic_error("apply: unknown operator");
}

Vec power_start(std::size_t dim) {
  Vec v(dim);
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  for (std::size_t k = 0; k < dim; ++k) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    const double u = static_cast<double>(state >> 11) * 0x1.0p-53;  // [0, 1)
    v[k] = 1.0 + 0.1 * (u - 0.5);
  }
  return v;
}

PowerResult power_iteration(const std::function<Vec(std::span<const double>)>& gram,
                            std::size_t dim, const PowerOptions& opts) {
  PowerResult res;
  if (dim == 0) return res;
  Vec v = power_start(dim);
  double nv = norm2(v);
  for (double& e : v) e /= nv;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    Vec w = gram(v);
    const double lambda = dot(v, w);
    const double nw = norm2(w);
    res.iterations = it;
    if (nw == 0.0) {
      res.value = 0.0;
      res.residual = 0.0;
      return res;
    }
    Vec r = w;
    axpy(-lambda, v, r);
    res.value = lambda;
    res.residual = norm2(r) / lambda;
    if (res.residual <= opts.tol) return res;
    for (std::size_t k = 0; k < dim; ++k) v[k] = w[k] / nw;
  }
  throw ConvergenceError("power iteration did not converge in " +
                         std::to_string(opts.max_iter) + " iterations (residual " +
                         std::to_string(res.residual) + ")");
}

double opnorm(const Layout& l, OperatorTag tag, const PowerOptions& opts) {
  const OperatorTag adj = adjoint(tag);
  auto gram = [&](std::span<const double> v) { return apply(l, adj, apply(l, tag, v)); };
  return std::sqrt(power_iteration(gram, in_dim(l, tag), opts).value);
}

double eig_HHT(const Layout& l, std::size_t i) {
  if (i < 1 || i > l.m - 1) {
    throw std::out_of_range("eig_HHT: index " + std::to_string(i) + " outside [1, m-1]");
  }
  const double s = l.scale();
  const double sn = std::sin(static_cast<double>(i) * std::numbers::pi / (2.0 * static_cast<double>(l.m)));
  return 4.0 * s * s * sn * sn;
}

double kappa_joint(const Layout& l) {
  const double m = static_cast<double>(l.m);
  return std::sin((m - 1.0) * std::numbers::pi / (2.0 * m)) / std::sin(std::numbers::pi / (2.0 * m));
}

namespace {

// Conjugate gradients for A A^T u = b (A A^T is positive definite because the
// rows of A are linearly independent chain differences).
Vec cg_solve_aat(const Layout& l, std::span<const double> b, double tol) {
  Vec x(b.size(), 0.0);
  Vec r(b.begin(), b.end());
  Vec p = r;
  double rr = dot(r, r);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return x;
  for (std::size_t it = 0; it < 10 * b.size() + 100; ++it) {
    if (std::sqrt(rr) <= tol * bnorm) return x;
    Vec ap = apply(l, OperatorTag::AAt, p);
    const double alpha = rr / dot(p, ap);
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * p[k];
  }
  throw ConvergenceError("kappa_A: conjugate gradients did not converge");
}

}  // namespace

double kappa_A(const Layout& l) {
  const double lmax = opnorm(l, OperatorTag::A) * opnorm(l, OperatorTag::A);
  if (l.m1 == 2) {
    // Rows of A touch disjoint block pairs, so A A^T = 2 (m L_f)^2 I.
    const double s = l.scale();
    return std::sqrt(lmax / (2.0 * s * s));
  }
  // Inverse iteration for the smallest eigenvalue of A A^T.
  constexpr double kTol = 1e-9;
  Vec v = power_start(l.n);
  double nv = norm2(v);
  for (double& e : v) e /= nv;
  double mu = 0.0;
  for (std::size_t it = 0; it < 100000; ++it) {
    Vec w = cg_solve_aat(l, v, 1e-13);
    const double nw = norm2(w);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] /= nw;
    Vec aw = apply(l, OperatorTag::AAt, w);
    mu = dot(w, aw);
    Vec r = aw;
    axpy(-mu, w, r);
    v = std::move(w);
    if (norm2(r) <= kTol * mu) return std::sqrt(lmax / mu);
  }
  throw ConvergenceError("kappa_A: inverse iteration did not converge");
}

BlockVector null_project_H(const BlockVector& v) {
  // A consensus vector is returned verbatim; summing m equal blocks and
  // dividing by m can round, and the projector must fix its range exactly.
  bool consensus = true;
  for (std::size_t i = 1; i < v.num_blocks() && consensus; ++i) {
    for (std::size_t j = 0; j < v.width(); ++j) {
      if (v.at(i, j) != v.at(0, j)) {
        consensus = false;
        break;
      }
    }
  }
  if (consensus) return v;
  const Vec avg = block_average(v);
  BlockVector out(v.num_blocks(), v.width());
  for (std::size_t i = 0; i < v.num_blocks(); ++i) {
    auto b = out.block(i);
    for (std::size_t j = 0; j < v.width(); ++j) b[j] = avg[j];
  }
  return out;
}

Vec block_average(const BlockVector& v) {
  Vec avg(v.width(), 0.0);
  for (std::size_t i = 0; i < v.num_blocks(); ++i) {
    auto b = v.block(i);
    for (std::size_t j = 0; j < v.width(); ++j) avg[j] += b[j];
  }
  const double m = static_cast<double>(v.num_blocks());
  for (double& a : avg) a /= m;
  return avg;
}

}  // namespace zerochain::linops
