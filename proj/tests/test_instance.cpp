// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "zerochain/bruteforce.hpp"
#include "zerochain/instance.hpp"
#include "zerochain/linops.hpp"

using namespace zerochain;
using std::numbers::pi;

namespace {

double lipschitz_ratio(const std::function<Vec(std::span<const double>)>& g, std::size_t dim,
                       std::mt19937_64& rng, double scale, double spread) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::uniform_real_distribution<double> du(-spread, spread);
  Vec x(dim), y(dim);
  for (double& v : x) v = u(rng);
  for (std::size_t k = 0; k < dim; ++k) y[k] = x[k] + du(rng);
  return norm2(sub(g(x), g(y))) / norm2(sub(x, y));
}

}  // namespace

TEST_SUITE("instance") {
  TEST_CASE("psi and phi reference values") {
    CHECK(psi(0.0) == 0.0);
    CHECK(psi(1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
    CHECK(psi(1.0) == doctest::Approx(0.6321206).epsilon(1e-7));
    CHECK(psi(-3.7) == 0.0);
    CHECK_FALSE(std::signbit(psi(-3.7)));
    CHECK(psi_prime(-3.7) == 0.0);
    CHECK(psi_prime(0.0) == 0.0);
    CHECK(psi_prime(0.8) == doctest::Approx(1.6 * std::exp(-0.64)));
    CHECK(phi(0.0) == doctest::Approx(2.0 * pi));
    CHECK(phi_prime(0.0) == 4.0);
    CHECK(phi(1.0) == doctest::Approx(3.0 * pi));
    CHECK(phi(1.0) == doctest::Approx(9.42478).epsilon(1e-6));
  }

  TEST_CASE("scalar bounds on a grid") {
    const double psi_prime_max = std::sqrt(2.0 / std::exp(1.0));
    for (double u = -5.0; u <= 5.0; u += 0.01) {
      CHECK(psi(u) >= 0.0);
      CHECK(psi(u) < 1.0);
      CHECK(psi_prime(u) >= 0.0);
      CHECK(psi_prime(u) <= psi_prime_max * (1.0 + 1e-15));
      if (u <= 0.0) {
        CHECK(psi(u) == 0.0);
        CHECK(psi_prime(u) == 0.0);
      }
    }
    for (double v = -1e3; v <= 1e3; v += 0.37) {
      CHECK(phi(v) > 0.0);
      CHECK(phi(v) < 4.0 * pi);
      CHECK(phi_prime(v) > 0.0);
      CHECK(phi_prime(v) <= 4.0);
    }
    for (double u = 1.0; u <= 6.0; u += 0.5) {
      for (double v = -0.999; v < 1.0; v += 0.037) CHECK(psi(u) * phi_prime(v) > 1.0);
    }
  }

  TEST_CASE("psi is differentiable across zero") {
    for (double h : {1e-3, 1e-5, 1e-7}) {
      CHECK(std::abs((psi(h) - psi(0.0)) / h) <= 2.0 * h);
      CHECK((psi(0.0) - psi(-h)) / h == 0.0);
    }
  }

  TEST_CASE("regimes split the blocks into thirds") {
    const Instance inst(zctest::c0());
    CHECK(inst.regime(1) == Regime::First);
    CHECK(inst.regime(4) == Regime::First);
    CHECK(inst.regime(5) == Regime::Middle);
    CHECK(inst.regime(8) == Regime::Middle);
    CHECK(inst.regime(9) == Regime::Last);
    CHECK(inst.regime(12) == Regime::Last);
    CHECK_THROWS_AS(inst.regime(0), std::out_of_range);
    CHECK_THROWS_AS(inst.regime(13), std::out_of_range);
  }

  TEST_CASE("h at zero and its range") {
    const Instance inst(zctest::c0());
    const Vec zero(5, 0.0);
    const double expected = -2.0 * pi * (1.0 - std::exp(-1.0));
    for (std::size_t i = 1; i <= 12; ++i) {
      CHECK(inst.h(i, zero) == doctest::Approx(expected).epsilon(1e-14));
      CHECK(inst.h(i, zero) == doctest::Approx(-3.9719).epsilon(1e-4));
    }
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int k = 0; k < 5000; ++k) {
      Vec z(5);
      for (double& v : z) v = u(rng);
      const std::size_t i = 1 + static_cast<std::size_t>(k) % 12;
      CHECK(inst.h(i, zero) - inst.h(i, z) <= 10.0 * pi * 5.0);
    }
  }

  TEST_CASE("h agrees with an independent evaluation") {
    const Instance inst(zctest::sized(2, 2, 7));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 200; ++k) {
      Vec z(7);
      for (double& v : z) v = u(rng);
      if (k % 3 == 0) z[0] = 0.0;  // supp(z) in {2, ..., dbar}
      const std::size_t i = 1 + static_cast<std::size_t>(k) % 12;
      CHECK(inst.h(i, z) == doctest::Approx(bruteforce::h_reference(inst, i, z)).epsilon(1e-13));
    }
  }

  TEST_CASE("grad_h at zero") {
    const Instance inst(zctest::c0());
    const Vec zero(5, 0.0);
    for (std::size_t i = 1; i <= 12; ++i) {
      const Vec g = inst.grad_h(i, zero);
      CHECK(g[0] == doctest::Approx(-4.0 * (1.0 - std::exp(-1.0))).epsilon(1e-15));
      for (std::size_t j = 1; j < 5; ++j) CHECK(g[j] == 0.0);
      // psi'' jumps at 0, so the central difference is only first order here.
      const Vec fd = bruteforce::fd_grad([&](std::span<const double> p) { return inst.h(i, p); },
                                         zero, 1e-8);
      CHECK(zctest::max_abs_diff(fd, g) <= 1e-6);
    }
  }

  TEST_CASE("grad_h matches finite differences and is bounded") {
    const Instance inst(zctest::c0());
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
      Vec z(5);
      for (double& v : z) v = u(rng);
      const std::size_t i = 1 + static_cast<std::size_t>(k) % 12;
      const Vec g = inst.grad_h(i, z);
      const Vec fd = bruteforce::fd_grad([&](std::span<const double> p) { return inst.h(i, p); }, z);
      CHECK(norm2(sub(fd, g)) <= 1e-6 * norm2(g));
      CHECK(norm_inf(g) < 25.0 * pi);
    }
  }

  TEST_CASE("f and grad_f at zero") {
    const Instance inst(zctest::c0());
    const Vec zero(5, 0.0);
    const double e1 = 1.0 - std::exp(-1.0);
    const double expected_grad = -8.0 * e1 * 0.1 / std::sqrt(12.0);
    const double expected_f = (300.0 * pi * 0.01 / 12.0) * (-2.0 * pi * e1);
    for (std::size_t i = 1; i <= 12; ++i) {
      const Vec g = inst.grad_f(i, zero);
      CHECK(g[0] == doctest::Approx(expected_grad).epsilon(1e-14));
      CHECK(g[0] == doctest::Approx(-0.1459820).epsilon(1e-6));
      for (std::size_t j = 1; j < 5; ++j) CHECK(g[j] == 0.0);
      const Vec fd = bruteforce::fd_grad([&](std::span<const double> p) { return inst.f(i, p); },
                                         zero);
      CHECK(zctest::max_abs_diff(fd, g) <= 1e-6);
      CHECK(inst.f(i, zero) == doctest::Approx(expected_f).epsilon(1e-14));
    }
    CHECK(expected_f == doctest::Approx(-3.1194).epsilon(1e-4));
    CHECK(inst.f0(inst.zeros_x()) == doctest::Approx(12.0 * inst.f(1, zero)).epsilon(1e-15));
  }

  TEST_CASE("grad_f sup-norm bound") {
    const Instance inst(zctest::c0());
    std::mt19937_64 rng(6);
    const double thr = inst.small_coordinate_threshold();
    std::uniform_real_distribution<double> u(-4.0 * thr, 4.0 * thr);
    for (int k = 0; k < 2000; ++k) {
      Vec z(5);
      for (double& v : z) v = u(rng);
      CHECK(norm_inf(inst.grad_f(1 + static_cast<std::size_t>(k) % 12, z)) <=
            50.0 * pi * 0.1 / std::sqrt(12.0));
    }
  }

  TEST_CASE("grad_f0 matches finite differences") {
    const Instance inst(zctest::c0());
    const Layout& l = inst.layout();
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
      const BlockVector x = zctest::random_x(inst, rng, 3.0 * inst.small_coordinate_threshold());
      const BlockVector g = inst.grad_f0(x);
      const Vec fd = bruteforce::fd_grad(
          [&](std::span<const double> p) {
            return inst.f0(BlockVector(l.m, l.dbar, Vec(p.begin(), p.end())));
          },
          x);
      CHECK(norm2(sub(fd, g)) <= 1e-6 * norm2(g));
    }
  }

  TEST_CASE("Lipschitz ratios stay under their bounds") {
    const Instance inst(zctest::c0());
    const Layout& l = inst.layout();
    const double thr = inst.small_coordinate_threshold();
    std::mt19937_64 rng(9);
    double worst_f0 = 0.0, worst_gh = 0.0, worst_h = 0.0, worst_fi = 0.0, worst_f0v = 0.0;
    auto grad_f0 = [&](std::span<const double> p) {
      return inst.grad_f0(BlockVector(l.m, l.dbar, Vec(p.begin(), p.end()))).values();
    };
    for (int k = 0; k < 100; ++k) {
      const double spread = (k % 2 == 0) ? 0.01 * thr : 2.0 * thr;
      worst_f0 = std::max(worst_f0, lipschitz_ratio(grad_f0, l.d, rng, 3.0 * thr, spread));
      const std::size_t i = 1 + static_cast<std::size_t>(k) % 12;
      worst_gh = std::max(worst_gh, lipschitz_ratio([&](std::span<const double> z) { return inst.grad_h(i, z); },
                                                    5, rng, 3.0, k % 2 == 0 ? 0.01 : 1.0));
      Vec z(5), w(5);
      std::uniform_real_distribution<double> u(-3.0, 3.0);
      for (std::size_t j = 0; j < 5; ++j) {
        z[j] = u(rng);
        w[j] = z[j] + 0.1 * u(rng);
      }
      worst_h = std::max(worst_h, std::abs(inst.h(i, z) - inst.h(i, w)) / norm2(sub(z, w)));
      const Vec zs = scaled(thr / 3.0, z);
      const Vec ws = scaled(thr / 3.0, w);
      worst_fi = std::max(worst_fi, std::abs(inst.f(i, zs) - inst.f(i, ws)) / norm2(sub(zs, ws)));
      const BlockVector x = zctest::random_x(inst, rng, 3.0 * thr);
      const BlockVector y = zctest::random_x(inst, rng, 3.0 * thr);
      worst_f0v = std::max(worst_f0v, std::abs(inst.f0(x) - inst.f0(y)) / norm2(sub(x, y)));
    }
    CHECK(worst_f0 <= 1.0 + 1e-8);
    CHECK(worst_gh <= 75.0 * pi * (1.0 + 1e-6));
    CHECK(worst_h <= 25.0 * pi * std::sqrt(5.0));
    CHECK(worst_fi <= 50.0 * pi * 0.1 * std::sqrt(5.0) / std::sqrt(12.0));
    CHECK(worst_f0v <= 50.0 * pi * 0.1 * std::sqrt(60.0));
  }

  TEST_CASE("f0 gap estimate from sampling") {
    const Instance inst(zctest::c0());
    const double f00 = inst.f0(inst.zeros_x());
    const double thr = inst.small_coordinate_threshold();
    std::mt19937_64 rng(10);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100000; ++k) {
      const BlockVector x = zctest::random_x(inst, rng, (k % 2 == 0 ? 4.0 : 40.0) * thr);
      best = std::min(best, inst.f0(x));
    }
    CHECK(f00 - best <= inst.delta_f0_upper());
    CHECK(f00 - best > 0.0);
  }

  TEST_CASE("delta_f0_upper arithmetic and scaling") {
    const Instance inst(zctest::c0());
    CHECK(inst.delta_f0_upper() == doctest::Approx(3000.0 * pi * pi * 5.0 * 0.01).epsilon(1e-14));
    CHECK(inst.delta_f0_upper() == doctest::Approx(1480.44).epsilon(1e-5));
    InstanceParams p = zctest::c0();
    p.eps = 0.2;
    CHECK(Instance(p).delta_f0_upper() == doctest::Approx(4.0 * inst.delta_f0_upper()).epsilon(1e-14));
    p.eps = 1.0;
    CHECK_THROWS_AS(Instance{p}, std::invalid_argument);
  }

  TEST_CASE("g and gbar") {
    const Instance inst(zctest::c0());
    CHECK(inst.g_val(inst.zeros_x()) == 0.0);
    BlockVector same = inst.zeros_x();
    for (std::size_t i = 0; i < 12; ++i) {
      for (std::size_t j = 0; j < 5; ++j) same.at(i, j) = 0.7 * static_cast<double>(j) - 1.1;
    }
    CHECK(inst.g_val(same) == 0.0);
    std::mt19937_64 rng(12);
    for (int k = 0; k < 20; ++k) {
      const BlockVector x = zctest::random_x(inst, rng, 5.0);
      const YVector ax(inst.layout().rows_m.size(), 5,
                       linops::apply(inst.layout(), linops::OperatorTag::Abar, x));
      CHECK(inst.g_val(x) == doctest::Approx(inst.gbar_val(ax)).epsilon(1e-12));
    }
  }

  TEST_CASE("evaluation is reproducible bit for bit") {
    const Instance a(zctest::c0());
    const Instance b(zctest::c0());
    std::mt19937_64 rng(13);
    const BlockVector x = zctest::random_x(a, rng, 30.0);
    CHECK(a.f0(x) == b.f0(x));
    CHECK(a.grad_f0(x) == b.grad_f0(x));
    CHECK(a.beta() == b.beta());
  }
}
