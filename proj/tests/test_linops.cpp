// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "zerochain/bruteforce.hpp"
#include "zerochain/instance.hpp"
#include "zerochain/linops.hpp"

using namespace zerochain;
using linops::OperatorTag;
using std::numbers::pi;

namespace {

// Chain-difference matrix written out entry by entry: row (k, j) holds
// -s at column (k, j) and +s at column (k+1, j), for 0-based blocks k.
bruteforce::Dense chain_matrix(const Layout& l, bool keep_m, bool keep_mc) {
  const double s = static_cast<double>(l.m) * l.lf;
  std::vector<std::size_t> rows;
  for (std::size_t k = 1; k < l.m; ++k) {
    if ((l.in_m[k] && keep_m) || (!l.in_m[k] && keep_mc)) rows.push_back(k);
  }
  bruteforce::Dense mat{rows.size() * l.dbar, l.d, Vec(rows.size() * l.dbar * l.d, 0.0)};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t k = rows[r];
    for (std::size_t j = 0; j < l.dbar; ++j) {
      mat(r * l.dbar + j, (k - 1) * l.dbar + j) = -s;
      mat(r * l.dbar + j, k * l.dbar + j) = s;
    }
  }
  return mat;
}

double kappa_from_dense(const bruteforce::Dense& mat) {
  const Vec ev = bruteforce::eig_symmetric(mat.gram());
  double lo = 0.0;
  for (double v : ev) {
    if (v > 1e-8 * ev.back()) {
      lo = v;
      break;
    }
  }
  return std::sqrt(ev.back() / lo);
}

}  // namespace

TEST_SUITE("linops") {
  TEST_CASE("H annihilates consensus vectors exactly") {
    const Instance inst(zctest::c0());
    const Layout& l = inst.layout();
    BlockVector x = inst.zeros_x();
    const double block[] = {1.5, -2.25, 0.0, 3e-7, 11.0};
    for (std::size_t i = 0; i < l.m; ++i) {
      for (std::size_t j = 0; j < l.dbar; ++j) x.at(i, j) = block[j];
    }
    for (double v : linops::apply(l, OperatorTag::H, x)) CHECK(v == 0.0);
  }

  TEST_CASE("Abar Abar^T = 2 m^2 L_f^2 I") {
    for (auto p : {zctest::c0(), zctest::sized(4, 2), zctest::sized(2, 3, 7)}) {
      p.lf = 1.7;
      const Instance inst(p);
      std::mt19937_64 rng(7);
      const YVector y = zctest::random_y(inst, rng, 3.0);
      const Vec out = linops::apply(inst.layout(), OperatorTag::AbarAbarT, y);
      const double s = static_cast<double>(inst.m()) * p.lf;
      for (std::size_t k = 0; k < out.size(); ++k) {
        CHECK(out[k] == doctest::Approx(2.0 * s * s * y[k]).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("operators agree with matrices written from the definition") {
    const Instance inst(zctest::sized(2, 1));  // m = 6
    const Layout& l = inst.layout();
    const bruteforce::Dense h = chain_matrix(l, true, true);
    const bruteforce::Dense a = chain_matrix(l, false, true);
    const bruteforce::Dense ab = chain_matrix(l, true, false);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
      const BlockVector x = zctest::random_x(inst, rng, 2.0);
      CHECK(zctest::max_abs_diff(linops::apply(l, OperatorTag::H, x), h.multiply(x)) <= 1e-12);
      CHECK(zctest::max_abs_diff(linops::apply(l, OperatorTag::A, x), a.multiply(x)) <= 1e-12);
      CHECK(zctest::max_abs_diff(linops::apply(l, OperatorTag::Abar, x), ab.multiply(x)) <= 1e-12);
      const Vec ata = a.transpose().multiply(a.multiply(x));
      CHECK(zctest::max_abs_diff(linops::apply(l, OperatorTag::AtA, x), ata) <= 1e-12);
      const Vec hth = h.transpose().multiply(h.multiply(x));
      CHECK(zctest::max_abs_diff(linops::apply(l, OperatorTag::HtH, x), hth) <= 1e-9);
    }
  }

  TEST_CASE("adjoint pairs satisfy <T v, w> = <v, T^* w>") {
    const Instance inst(zctest::sized(4, 2));
    const Layout& l = inst.layout();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (OperatorTag t : {OperatorTag::A, OperatorTag::Abar, OperatorTag::H}) {
      Vec v(linops::in_dim(l, t));
      Vec w(linops::out_dim(l, t));
      for (double& e : v) e = u(rng);
      for (double& e : w) e = u(rng);
      const double lhs = dot(linops::apply(l, t, v), w);
      const double rhs = dot(v, linops::apply(l, linops::adjoint(t), w));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      CHECK(linops::in_dim(l, linops::adjoint(t)) == linops::out_dim(l, t));
    }
  }

  TEST_CASE("length mismatch throws") {
    const Layout l = Layout::from(zctest::c0());
    CHECK_THROWS_AS(linops::apply(l, OperatorTag::A, Vec(7, 0.0)), std::invalid_argument);
  }

  TEST_CASE("exact zeros survive differences") {
    const Instance inst(zctest::c0());
    BlockVector x = inst.zeros_x();
    x.at(3, 2) = 1.0;
    const Vec hx = linops::apply(inst.layout(), OperatorTag::HtH, x);
    for (std::size_t k = 0; k < hx.size(); ++k) {
      if (k % 5 != 2) CHECK(hx[k] == 0.0);
    }
  }

  TEST_CASE("operator norms") {
    const Layout l = Layout::from(zctest::c0());
    CHECK(linops::opnorm(l, OperatorTag::H) ==
          doctest::Approx(2.0 * 12.0 * std::sin(11.0 * pi / 24.0)).epsilon(1e-8));
    CHECK(linops::opnorm(l, OperatorTag::H) == doctest::Approx(23.7946).epsilon(1e-5));
    CHECK(linops::opnorm(l, OperatorTag::A) == doctest::Approx(12.0 * std::sqrt(2.0)).epsilon(1e-8));
    CHECK(linops::opnorm(l, OperatorTag::A) == doctest::Approx(16.9706).epsilon(1e-5));
    CHECK(linops::opnorm(l, OperatorTag::Abar) ==
          doctest::Approx(std::sqrt(2.0) * 12.0).epsilon(1e-8));
    // Dense cross-check.
    const Vec ev = bruteforce::eig_symmetric(chain_matrix(l, false, true).gram());
    CHECK(linops::opnorm(l, OperatorTag::A) == doctest::Approx(std::sqrt(ev.back())).epsilon(1e-8));
  }

  TEST_CASE("closed-form eigenvalues of H H^T") {
    const Layout l = Layout::from(zctest::c0());
    CHECK(linops::eig_HHT(l, 1) == doctest::Approx(576.0 * std::pow(std::sin(pi / 24.0), 2)));
    CHECK(linops::eig_HHT(l, 1) == doctest::Approx(9.8134).epsilon(1e-4));
    const Vec ev = bruteforce::eig_symmetric(chain_matrix(l, true, true).gram());
    Vec closed;
    for (std::size_t i = 1; i < l.m; ++i) closed.insert(closed.end(), l.dbar, linops::eig_HHT(l, i));
    std::sort(closed.begin(), closed.end());
    REQUIRE(ev.size() == closed.size());
    CHECK(zctest::max_abs_diff(ev, closed) <= 1e-9);
    const double ratio = linops::eig_HHT(l, l.m - 1) / linops::eig_HHT(l, 1);
    const double k = std::sin(11.0 * pi / 24.0) / std::sin(pi / 24.0);
    CHECK(ratio == doctest::Approx(k * k).epsilon(1e-12));
    CHECK(linops::eig_HHT(l, l.m - 1) == doctest::Approx(ev.back()).epsilon(1e-12));
    CHECK_THROWS(linops::eig_HHT(l, 0));
    CHECK_THROWS(linops::eig_HHT(l, l.m));
  }

  TEST_CASE("kappa_joint against dense spectra") {
    const Layout l22 = Layout::from(zctest::c0());
    const double k22 = linops::kappa_joint(l22);
    CHECK(k22 == doctest::Approx(7.5958).epsilon(1e-4));
    CHECK(k22 == doctest::Approx(kappa_from_dense(chain_matrix(l22, true, true))).epsilon(1e-10));
    CHECK(k22 >= 3.0);
    CHECK(k22 < 12.0);
    const Layout l21 = Layout::from(zctest::sized(2, 1));
    const double k21 = linops::kappa_joint(l21);
    CHECK(k21 == doctest::Approx(3.7321).epsilon(1e-4));
    CHECK(k21 == doctest::Approx(kappa_from_dense(chain_matrix(l21, true, true))).epsilon(1e-10));
  }

  TEST_CASE("kappa_A against dense spectra and the ratio bound") {
    for (auto [m1, m2] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{4, 2}, std::pair{4, 1}}) {
      const Layout l = Layout::from(zctest::sized(m1, m2));
      const double ka = linops::kappa_A(l);
      CHECK(ka == doctest::Approx(kappa_from_dense(chain_matrix(l, false, true))).epsilon(1e-7));
      CHECK(linops::kappa_joint(l) / ka >= 0.75 * m2);
    }
  }

  TEST_CASE("projection onto Null(H)") {
    const Instance inst(zctest::c0());
    std::mt19937_64 rng(5);
    const BlockVector v = zctest::random_x(inst, rng, 4.0);
    const BlockVector p = linops::null_project_H(v);
    CHECK(linops::null_project_H(p) == p);

    BlockVector same = inst.zeros_x();
    for (std::size_t i = 0; i < inst.m(); ++i) {
      for (std::size_t j = 0; j < inst.dbar(); ++j) same.at(i, j) = 0.1 * static_cast<double>(j) - 0.3;
    }
    CHECK(linops::null_project_H(same) == same);

    const BlockVector x = zctest::random_x(inst, rng, 20.0);
    const BlockVector g = inst.grad_f0(x);
    Vec sum(inst.dbar(), 0.0);
    for (std::size_t i = 1; i <= inst.m(); ++i) axpy(1.0, inst.grad_f(i, x.block(i - 1)), sum);
    const double lhs = std::pow(norm2(linops::null_project_H(g)), 2);
    const double rhs = std::pow(norm2(sum), 2) / static_cast<double>(inst.m());
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}
