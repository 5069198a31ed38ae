// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/bruteforce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

namespace zerochain::bruteforce {

using linops::OperatorTag;

Vec Dense::multiply(std::span<const double> v) const {
  if (v.size() != cols) throw std::invalid_argument("Dense::multiply: length mismatch");
  Vec out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += data[i * cols + j] * v[j];
    out[i] = s;
  }
  return out;
}

Dense Dense::transpose() const {
  Dense t{cols, rows, Vec(rows * cols)};
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Dense Dense::gram() const {
  Dense g{rows, rows, Vec(rows * rows, 0.0)};
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = i; k < rows; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols; ++j) s += (*this)(i, j) * (*this)(k, j);
      g(i, k) = g(k, i) = s;
    }
  }
  return g;
}

std::string Dense::to_csv() const {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", (*this)(i, j));
      out += buf;
      out += j + 1 < cols ? ',' : '\n';
    }
  }
  return out;
}

Dense identity(std::size_t n) {
  Dense id{n, n, Vec(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) id(i, i) = 1.0;
  return id;
}

Dense dense(const Layout& l, OperatorTag tag) {
  if (l.m * l.dbar > 2048) {
    throw std::length_error("dense: m * dbar = " + std::to_string(l.m * l.dbar) +
                            " exceeds the 2048 guard");
  }
  const std::size_t in = linops::in_dim(l, tag);
  const std::size_t out = linops::out_dim(l, tag);
  Dense mat{out, in, Vec(out * in, 0.0)};
  Vec e(in, 0.0);
  for (std::size_t j = 0; j < in; ++j) {
    e[j] = 1.0;
    const Vec col = linops::apply(l, tag, e);
    for (std::size_t i = 0; i < out; ++i) mat(i, j) = col[i];
    e[j] = 0.0;
  }
  return mat;
}

Vec eig_symmetric(const Dense& mat, double tol) {
  if (mat.rows != mat.cols) throw std::invalid_argument("eig_symmetric: matrix not square");
  const std::size_t n = mat.rows;
  Dense a = mat;
  double fro = 0.0;
  for (double v : a.data) fro += v * v;
  fro = std::sqrt(fro);
  auto off = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };
  bool polish = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    const bool done = polish;
    // Convergence is quadratic, so one sweep past the tolerance takes the
    // off-diagonal mass down to rounding level.
    if (!polish && off() <= tol * fro) polish = true;
    if (done) {
      Vec ev(n);
      for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
      std::sort(ev.begin(), ev.end());
      return ev;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  throw ConvergenceError("eig_symmetric: Jacobi sweeps did not converge");
}

Vec eig_dense(const Layout& l, OperatorTag tag) { return eig_symmetric(dense(l, tag)); }

Vec fd_grad(const std::function<double(std::span<const double>)>& fn,
            std::span<const double> point, double step) {
  Vec p(point.begin(), point.end());
  Vec g(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double orig = p[k];
    p[k] = orig + step;
    const double up = fn(p);
    p[k] = orig - step;
    const double dn = fn(p);
    p[k] = orig;
    g[k] = (up - dn) / (2.0 * step);
  }
  return g;
}

double prox_abs_numeric(double y, double c) {
  // q(z) = 1/2 (z - y)^2 + c |z|. Comparisons use the exact difference
  // q(z1) - q(z2) = 1/2 (z1 - z2)(z1 + z2 - 2y) + c (|z1| - |z2|), which
  // does not cancel near the minimizer the way q(z1) - q(z2) would.
  auto less = [&](double z1, double z2) {
    return 0.5 * (z1 - z2) * (z1 + z2 - 2.0 * y) + c * (std::abs(z1) - std::abs(z2)) < 0.0;
  };
  double lo = std::min(0.0, y) - 1.0;
  double hi = std::max(0.0, y) + 1.0;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  while (hi - lo > 1e-12 * (1.0 + std::abs(y))) {
    if (less(x1, x2)) {
      hi = x2;
      x2 = x1;
      x1 = hi - ratio * (hi - lo);
    } else {
      lo = x1;
      x1 = x2;
      x2 = lo + ratio * (hi - lo);
    }
  }
  const double mid = 0.5 * (lo + hi);
  // The kink at 0 is a common minimizer; prefer it when it is no worse.
  if (std::abs(mid) < 1e-9 && !less(mid, 0.0)) return 0.0;
  return mid;
}

std::pair<double, double> prox_pair_numeric(double a, double b, double c) {
  // In (s, delta) = (z1 + z2, z1 - z2) the objective separates into
  // 1/4 (s - (a+b))^2 + 1/4 (delta - (a-b))^2 + c |delta|.
  const double s = a + b;
  const double delta = prox_abs_numeric(a - b, 2.0 * c);
  return {0.5 * (s + delta), 0.5 * (s - delta)};
}

Vec prox_numeric(const Instance& inst, Which which, std::span<const double> point, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("prox_numeric: eta must be positive");
  Vec out(point.begin(), point.end());
  if (which == Which::Gbar) {
    const double c = eta * inst.gbar_weight();
    for (double& v : out) v = prox_abs_numeric(v, c);
    return out;
  }
  const Layout& l = inst.layout();
  const double c = eta * inst.beta();
  for (std::size_t k : l.rows_m) {
    for (std::size_t j = 0; j < l.dbar; ++j) {
      const std::size_t lo = (k - 1) * l.dbar + j;
      const std::size_t hi = k * l.dbar + j;
      const auto [p, q] = prox_pair_numeric(point[lo], point[hi], c);
      out[lo] = p;
      out[hi] = q;
    }
  }
  return out;
}

double lipschitz_probe(const std::function<Vec(std::span<const double>)>& grad,
                       std::size_t dim, std::size_t trials, std::uint64_t seed, double scale) {
  if (trials < 1) throw std::invalid_argument("lipschitz_probe: trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-scale, scale);
  double best = 0.0;
  Vec x(dim);
  Vec y(dim);
  for (std::size_t t = 0; t < trials; ++t) {
    for (double& v : x) v = unif(rng);
    for (double& v : y) v = unif(rng);
    const double den = norm2(sub(x, y));
    if (den == 0.0) continue;
    best = std::max(best, norm2(sub(grad(x), grad(y))) / den);
  }
  return best;
}

double h_reference(const Instance& inst, std::size_t i, std::span<const double> z) {
  const double pi = std::numbers::pi;
  auto Psi = [](double u) { return u > 0.0 ? 1.0 - std::exp(-u * u) : 0.0; };
  auto Phi = [pi](double v) { return 4.0 * std::atan(v) + 2.0 * pi; };
  const std::size_t d = z.size();
  // term[j] = phi(z, j), 1-based j.
  Vec term(d + 1, 0.0);
  term[1] = -Psi(1.0) * Phi(z[0]);
  for (std::size_t j = 2; j <= d; ++j) {
    term[j] = Psi(-z[j - 2]) * Phi(-z[j - 1]) - Psi(z[j - 2]) * Phi(z[j - 1]);
  }
  const std::size_t m = inst.m();
  double val = term[1];
  if (3 * i <= m) {
    for (std::size_t j = 1; j <= d / 2; ++j) val += 3.0 * term[2 * j];
  } else if (3 * i > 2 * m) {
    for (std::size_t j = 1; j <= d / 2; ++j) val += 3.0 * term[2 * j + 1];
  }
  return val;
}

double residual_P_dense(const Instance& inst, const BlockVector& x, std::size_t sweeps) {
  const Layout& l = inst.layout();
  const Dense at = dense(l, OperatorTag::A_adj);       // d x n
  const Dense abt = dense(l, OperatorTag::Abar_adj);   // d x nbar
  const std::size_t d = l.d;
  const std::size_t cols = l.n + l.nbar;
  // Column k of M = [A^T, Abar^T].
  auto col = [&](std::size_t k, std::size_t row) {
    return k < l.n ? at(row, k) : abt(row, k - l.n);
  };
  const Vec abx = linops::apply(l, OperatorTag::Abar, x);
  const double c = inst.gbar_weight();
  Vec lo(cols, -INFINITY);
  Vec hi(cols, INFINITY);
  Vec v(cols, 0.0);
  for (std::size_t k = 0; k < l.nbar; ++k) {
    if (abx[k] == 0.0) {
      lo[l.n + k] = -c;
      hi[l.n + k] = c;
    } else {
      lo[l.n + k] = hi[l.n + k] = abx[k] > 0.0 ? c : -c;
      v[l.n + k] = lo[l.n + k];
    }
  }
  Vec res = inst.grad_f0(x).values();
  for (std::size_t k = l.n; k < cols; ++k) {
    if (v[k] != 0.0) {
      for (std::size_t r = 0; r < d; ++r) res[r] += v[k] * col(k, r);
    }
  }
  Vec cn(cols, 0.0);
  for (std::size_t k = 0; k < cols; ++k) {
    for (std::size_t r = 0; r < d; ++r) cn[k] += col(k, r) * col(k, r);
  }
  for (std::size_t s = 0; s < sweeps; ++s) {
    double moved = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      double g = 0.0;
      for (std::size_t r = 0; r < d; ++r) g += col(k, r) * res[r];
      const double nv = std::clamp(v[k] - g / cn[k], lo[k], hi[k]);
      const double dv = nv - v[k];
      if (dv != 0.0) {
        for (std::size_t r = 0; r < d; ++r) res[r] += dv * col(k, r);
        v[k] = nv;
        moved = std::max(moved, std::abs(dv));
      }
    }
    if (moved < 1e-14) break;
  }
  return std::max(norm2(res), norm2(linops::apply(l, OperatorTag::A, x)));
}

}  // namespace zerochain::bruteforce
