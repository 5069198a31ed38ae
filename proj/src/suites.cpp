// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "zerochain/algorithms.hpp"
#include "zerochain/bruteforce.hpp"
#include "zerochain/linops.hpp"
#include "zerochain/oracle.hpp"
#include "zerochain/prox.hpp"
#include "zerochain/stationarity.hpp"

namespace zerochain::suites {

namespace {

using json = nlohmann::ordered_json;
using linops::OperatorTag;
using std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Check at_most(std::string name, double value, double bound, std::string detail = {}) {
  Check c{std::move(name), value <= bound, bound - value, std::move(detail)};
  if (c.detail.empty()) c.detail = "value " + fmt(value) + " <= " + fmt(bound);
  return c;
}

Check above(std::string name, double value, double bound, std::string detail = {}) {
  Check c{std::move(name), value > bound, value - bound, std::move(detail)};
  if (c.detail.empty()) c.detail = "value " + fmt(value) + " > " + fmt(bound);
  return c;
}

Check none(std::string name, std::size_t count, std::string detail = {}) {
  Check c{std::move(name), count == 0, -static_cast<double>(count), std::move(detail)};
  if (c.detail.empty()) c.detail = std::to_string(count) + " violations";
  return c;
}

InstanceParams with_sizes(InstanceParams p, int m1, int m2) {
  p.m1 = m1;
  p.m2 = m2;
  p.beta.reset();
  return p;
}

// Largest t with t <= 1 + m (dbar - 2) / divisor.
std::size_t nonstationary_horizon(std::size_t m, std::size_t dbar, int divisor) {
  return 1 + m * (dbar - 2) / static_cast<std::size_t>(divisor);
}

// ---------------------------------------------------------------- 1
void spectrum(const InstanceParams& base, std::uint64_t, std::vector<Check>& out) {
  const Instance inst(base);
  const Layout& l = inst.layout();
  const bruteforce::Dense h = bruteforce::dense(l, OperatorTag::H);
  const Vec ev = bruteforce::eig_symmetric(h.gram());
  Vec closed;
  for (std::size_t i = 1; i < l.m; ++i) closed.insert(closed.end(), l.dbar, linops::eig_HHT(l, i));
  std::sort(closed.begin(), closed.end());
  double dev = 0.0;
  for (std::size_t k = 0; k < ev.size(); ++k) dev = std::max(dev, std::abs(ev[k] - closed[k]));
  out.push_back(at_most("HHt spectrum matches closed form with multiplicity dbar", dev, 1e-9,
                        std::to_string(ev.size()) + " eigenvalues, max deviation " + fmt(dev)));

  const double kd = std::sqrt(ev.back() / ev.front());
  const double kj = linops::kappa_joint(l);
  out.push_back(at_most("kappa_joint matches dense singular values", std::abs(kd - kj), 1e-9,
                        "kappa_joint " + fmt(kj) + ", dense " + fmt(kd)));
  const double m = static_cast<double>(l.m);
  const double band = std::min(kj - m / 4.0, m - kj);
  out.push_back({"m/4 <= kappa_joint < m", kj >= m / 4.0 && kj < m, band,
                 fmt(m / 4.0) + " <= " + fmt(kj) + " < " + fmt(m)});
}

// ---------------------------------------------------------------- 2
void gradients(const InstanceParams& base, std::uint64_t seed, std::vector<Check>& out) {
  const Instance inst(base);
  const Layout& l = inst.layout();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-2.5, 2.5);

  double worst_h = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    const std::size_t i = 1 + k % l.m;
    Vec z(l.dbar);
    for (double& v : z) v = unif(rng);
    const Vec g = inst.grad_h(i, z);
    const Vec fd = bruteforce::fd_grad([&](std::span<const double> p) { return inst.h(i, p); }, z);
    worst_h = std::max(worst_h, norm2(sub(fd, g)) / norm2(g));
  }
  out.push_back(at_most("grad_h matches central differences (100 points)", worst_h, 1e-6,
                        "max relative error " + fmt(worst_h)));

  const double thr = inst.small_coordinate_threshold();
  double worst_f0 = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    BlockVector x = inst.zeros_x();
    Vec common(l.dbar);
    for (double& v : common) v = unif(rng) * thr;
    const double noise = (k % 4 == 0) ? 0.0 : 0.5 * thr;
    for (std::size_t i = 0; i < l.m; ++i) {
      for (std::size_t j = 0; j < l.dbar; ++j) x.at(i, j) = common[j] + noise * unif(rng);
    }
    const BlockVector g = inst.grad_f0(x);
    const Vec fd = bruteforce::fd_grad(
        [&](std::span<const double> p) {
          return inst.f0(BlockVector(l.m, l.dbar, Vec(p.begin(), p.end())));
        },
        x);
    worst_f0 = std::max(worst_f0, norm2(sub(fd, g)) / norm2(g));
  }
  out.push_back(at_most("grad_f0 matches central differences (100 points)", worst_f0, 1e-6,
                        "max relative error " + fmt(worst_f0)));

  double probe = 0.0;
  for (double scale : {0.25, 3.0}) {
    probe = std::max(probe, bruteforce::lipschitz_probe(
                                [&](std::span<const double> p) {
                                  return inst.grad_f0(BlockVector(l.m, l.dbar, Vec(p.begin(), p.end())))
                                      .values();
                                },
                                l.d, 5000, seed + 1 + static_cast<std::uint64_t>(scale * 4),
                                scale * thr));
  }
  out.push_back(at_most("grad_f0 Lipschitz probe (10^4 pairs)", probe, inst.lf() * (1.0 + 1e-8),
                        "max ratio " + fmt(probe) + " vs L_f " + fmt(inst.lf())));
}

// ---------------------------------------------------------------- 3
void proxes(const InstanceParams& base, std::uint64_t seed, std::vector<Check>& out) {
  const Instance inst(base);
  const Layout& l = inst.layout();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto draw_eta = [&] { return std::exp(std::log(0.01) + u01(rng) * std::log(100.0)); };
  const std::size_t pairs_per_draw = l.rows_m.size() * l.dbar;
  const std::size_t draws = (1000 + pairs_per_draw - 1) / pairs_per_draw;

  double dev_g = 0.0;
  double chk_g = 0.0;
  for (std::size_t k = 0; k < draws; ++k) {
    const double eta = draw_eta();
    const double c = eta * inst.beta();
    BlockVector x = inst.zeros_x();
    for (double& v : x.values()) v = (2.0 * u01(rng) - 1.0) * 3.0 * c;
    // Spread the pair differences across both sides of the 2c threshold.
    for (std::size_t row : l.rows_m) {
      for (std::size_t j = 0; j < l.dbar; ++j) {
        x.at(row, j) = x.at(row - 1, j) + (2.0 * u01(rng) - 1.0) * 4.0 * c;
      }
    }
    const BlockVector z = prox::prox_g(inst, x, eta);
    const Vec zn = bruteforce::prox_numeric(inst, bruteforce::Which::G, x, eta);
    dev_g = std::max(dev_g, norm_inf(sub(z, zn)));
    chk_g = std::max(chk_g, prox::check_g(inst, x, z, eta));
  }
  const std::string pairs = std::to_string(draws * pairs_per_draw) + " pairs";
  out.push_back(at_most("prox_g matches numeric minimization", dev_g, 1e-8,
                        pairs + ", max deviation " + fmt(dev_g)));
  out.push_back(at_most("prox_g subgradient optimality", chk_g, 1e-10,
                        pairs + ", max residual " + fmt(chk_g)));

  const std::size_t coords_per_draw = l.nbar;
  const std::size_t ydraws = (1000 + coords_per_draw - 1) / coords_per_draw;
  double dev_b = 0.0;
  double chk_b = 0.0;
  for (std::size_t k = 0; k < ydraws; ++k) {
    const double eta = draw_eta();
    const double c = eta * inst.gbar_weight();
    YVector y = inst.zeros_y();
    for (double& v : y.values()) v = (2.0 * u01(rng) - 1.0) * 3.0 * c;
    const YVector z = prox::prox_gbar(inst, y, eta);
    const Vec zn = bruteforce::prox_numeric(inst, bruteforce::Which::Gbar, y, eta);
    dev_b = std::max(dev_b, norm_inf(sub(z, zn)));
    chk_b = std::max(chk_b, prox::check_gbar(inst, y, z, eta));
  }
  const std::string coords = std::to_string(ydraws * coords_per_draw) + " coordinates";
  out.push_back(at_most("prox_gbar matches numeric minimization", dev_b, 1e-8,
                        coords + ", max deviation " + fmt(dev_b)));
  out.push_back(at_most("prox_gbar subgradient optimality", chk_b, 1e-10,
                        coords + ", max residual " + fmt(chk_b)));
}

// ---------------------------------------------------------------- 4
using Support = std::set<std::size_t>;

Support support_of(std::span<const double> v) {
  Support s;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] != 0.0) s.insert(j);
  }
  return s;
}

bool subset(const Support& a, const Support& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Support unite(const Support& a, const Support& b) {
  Support s = a;
  s.insert(b.begin(), b.end());
  return s;
}

void supports(const InstanceParams& base, std::uint64_t seed, std::vector<Check>& out) {
  const Instance inst(base);
  const Layout& l = inst.layout();
  const std::size_t m = l.m;
  const std::size_t nb = l.rows_m.size();
  const int m1 = l.m1;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double thr = inst.small_coordinate_threshold();

  std::size_t bad_grad = 0, bad_ata = 0, bad_prox_g = 0, bad_abar_t = 0, bad_abar = 0,
              bad_gram = 0, bad_prox_gbar = 0, nonzero_grad = 0;
  constexpr std::size_t kTrials = 1000;
  for (std::size_t trial = 0; trial < kTrials; ++trial) {
    // Gradient supports of f_i for z supported on {1, ..., jbar - 1}.
    const std::size_t jbar = 1 + trial % l.dbar;
    const std::size_t i = 1 + (trial / l.dbar) % m;
    Vec z(l.dbar, 0.0);
    for (std::size_t j = 0; j + 1 < jbar; ++j) {
      if (u01(rng) < 0.75) z[j] = 3.0 * gauss(rng) * thr;
    }
    std::size_t allowed = jbar;  // coordinates 1..allowed may be nonzero
    if (jbar > 1) {
      const bool low = (jbar % 2 == 0) ? (3 * i > m) : (3 * i <= 2 * m);
      if (low) allowed = jbar - 1;
    }
    const Vec g = inst.grad_f(i, z);
    for (std::size_t j = allowed; j < l.dbar; ++j) {
      if (g[j] != 0.0) ++bad_grad;
    }
    nonzero_grad += support_of(g).size();

    // Random sparse x and y.
    const double density = 0.05 + 0.45 * u01(rng);
    BlockVector x = inst.zeros_x();
    for (double& v : x.values()) {
      if (u01(rng) < density) v = gauss(rng);
    }
    YVector y = inst.zeros_y();
    for (double& v : y.values()) {
      if (u01(rng) < density) v = gauss(rng);
    }
    std::vector<Support> sx(m);
    for (std::size_t b = 0; b < m; ++b) sx[b] = support_of(x.block(b));
    auto neighbours = [&](std::size_t b) {
      Support s = sx[b];
      if (b > 0) s = unite(s, sx[b - 1]);
      if (b + 1 < m) s = unite(s, sx[b + 1]);
      return s;
    };

    const Vec ata = linops::apply(l, OperatorTag::AtA, x);
    const Vec abab = linops::apply(l, OperatorTag::AbarTAbar, x);
    const Vec mix = add(scaled(gauss(rng), ata), scaled(gauss(rng), abab));
    const BlockVector px = prox::prox_g(inst, x, 0.01 + u01(rng));
    for (std::size_t b = 0; b < m; ++b) {
      const Support allowed_b = neighbours(b);
      for (const Vec* v : {&ata, &abab, &mix}) {
        if (!subset(support_of(std::span<const double>(*v).subspan(b * l.dbar, l.dbar)),
                    allowed_b)) {
          ++bad_ata;
        }
      }
      if (!subset(support_of(px.block(b)), allowed_b)) ++bad_prox_g;
    }

    // Abar^T y: block b (1-based bb) hears only from y_j with row j*m1 in {bb-1, bb}.
    const BlockVector aty(m, l.dbar, linops::apply(l, OperatorTag::Abar_adj, y));
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t bb = b + 1;
      Support expect;
      if (bb >= 2 && l.in_m[bb - 1]) expect = unite(expect, support_of(y.block((bb - 1) / m1 - 1)));
      if (bb <= m - 1 && l.in_m[bb]) expect = unite(expect, support_of(y.block(bb / m1 - 1)));
      if (support_of(aty.block(b)) != expect) ++bad_abar_t;
    }

    // Abar x: block j (1-based jj) reads x_{jj m1} and x_{jj m1 + 1}.
    const YVector abx(nb, l.dbar, linops::apply(l, OperatorTag::Abar, x));
    for (std::size_t j = 0; j < nb; ++j) {
      const std::size_t row = (j + 1) * static_cast<std::size_t>(m1);
      if (!subset(support_of(abx.block(j)), unite(sx[row - 1], sx[row]))) ++bad_abar;
    }

    const Vec gram = linops::apply(l, OperatorTag::AbarAbarT, y);
    if (support_of(gram) != support_of(y)) ++bad_gram;

    const YVector py = prox::prox_gbar(inst, y, 0.01 + u01(rng));
    for (std::size_t j = 0; j < nb; ++j) {
      if (!subset(support_of(py.block(j)), support_of(y.block(j)))) ++bad_prox_gbar;
    }
  }
  const std::string n = std::to_string(kTrials) + " random sparse inputs";
  out.push_back(none("gradient supports follow the regime table", bad_grad,
                     n + ", " + std::to_string(nonzero_grad) + " nonzero gradient entries, " +
                         std::to_string(bad_grad) + " outside the allowed set"));
  out.push_back(none("A^T A, Abar^T Abar and their span are block-tridiagonal in support", bad_ata));
  out.push_back(none("prox_g is block-tridiagonal in support", bad_prox_g));
  out.push_back(none("Abar^T y block supports equal the adjacent y blocks", bad_abar_t));
  out.push_back(none("Abar x block j lies in supp(x_{j m1}) + supp(x_{j m1 + 1})", bad_abar));
  out.push_back(none("supp(y) = supp(Abar Abar^T y)", bad_gram));
  out.push_back(none("prox_gbar keeps supp(y_j)", bad_prox_gbar));
}

// ---------------------------------------------------------------- 5
void certificates(const InstanceParams& base, std::uint64_t seed, std::vector<Check>& out) {
  const Instance inst(base);
  const Layout& l = inst.layout();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double thr = inst.small_coordinate_threshold();
  const double eps = inst.eps();

  double min_gap = std::numeric_limits<double>::infinity();
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t with_witness = 0;
  constexpr std::size_t kPoints = 10000;
  for (std::size_t k = 0; k < kPoints; ++k) {
    BlockVector x = inst.zeros_x();
    const int family = static_cast<int>(k % 3);
    if (family == 2) {
      for (double& v : x.values()) v = (2.0 * u01(rng) - 1.0) * 5.0 * thr;
    } else {
      Vec common(l.dbar);
      for (double& v : common) {
        const double sign = u01(rng) < 0.5 ? -1.0 : 1.0;
        const bool small = family == 0 && u01(rng) < 0.4;
        v = sign * thr * (small ? u01(rng) : 1.01 + 3.0 * u01(rng));
      }
      const double noise = family == 0 ? 2.0 * u01(rng) * thr : 0.01 * thr;
      for (std::size_t i = 0; i < l.m; ++i) {
        for (std::size_t j = 0; j < l.dbar; ++j) x.at(i, j) = common[j] + noise * gauss(rng);
      }
    }
    const StationarityReport ap = residual_AP(inst, x);
    min_gap = std::min(min_gap, ap.residual - ap.certificate_lb);
    if (small_coordinate_witness(inst, x)) {
      ++with_witness;
      min_margin = std::min(min_margin, ap.certificate_lb - eps);
    }
  }
  out.push_back(above("residual_AP >= certificate_lb", min_gap, -1e-12,
                      std::to_string(kPoints) + " points, min residual_AP - certificate_lb " +
                          fmt(min_gap)));
  Check c = above("witness implies certificate_lb > eps", min_margin, 0.0,
                  std::to_string(with_witness) + " of " + std::to_string(kPoints) +
                      " points carry a witness, min certificate_lb - eps " + fmt(min_margin));
  out.push_back(c);
  out.push_back({"both witness and witness-free points sampled",
                 with_witness > 0 && with_witness < kPoints,
                 static_cast<double>(std::min(with_witness, kPoints - with_witness)),
                 std::to_string(with_witness) + " with, " + std::to_string(kPoints - with_witness) +
                     " without"});
}

// ---------------------------------------------------------------- 6 and 8
struct FrontSummary {
  std::size_t violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();  // residual - bound on t <= horizon
};

void scan_ap(const RunTrace& tr, std::size_t m, std::size_t horizon, double bound,
             FrontSummary& s) {
  s.violations += front_rate_violations(tr.transcript.fronts, m, 6);
  for (const TraceRow& r : tr.rows) {
    if (r.t <= horizon) s.min_margin = std::min(s.min_margin, r.residual_ap - bound);
  }
}

std::optional<std::size_t> first_full_front(const RunTrace& tr, std::size_t dbar) {
  for (const TraceRow& r : tr.rows) {
    if (r.front >= static_cast<int>(dbar)) return r.t;
  }
  return std::nullopt;
}

void class1_suite(const Instance& inst, std::uint64_t seed, const std::string& tag,
                  std::vector<Check>& out, std::vector<RunTrace>* shipped = nullptr) {
  const std::size_t m = inst.m();
  const std::size_t horizon = nonstationary_horizon(m, inst.dbar(), 6);
  RunOptions o;
  o.max_oracles = 500;
  std::vector<RunTrace> runs;
  runs.push_back(run_penalty_class1(inst, constant_schedule(1.0), std::nullopt, o));
  runs.push_back(run_alm_class1(inst, 1.0, 1.0, std::nullopt, o));
  for (const RunTrace& tr : runs) {
    FrontSummary s;
    scan_ap(tr, m, horizon, inst.eps(), s);
    const SpanReport rep = tr.verify(inst);
    out.push_back(none(tag + tr.algorithm + ": front-rate (divisor 6)", s.violations,
                       std::to_string(tr.rows.size()) + " iterates, " +
                           std::to_string(tr.transcript.count()) + " oracle calls, " +
                           std::to_string(s.violations) + " violations"));
    out.push_back(above(tag + tr.algorithm + ": residual_AP > eps for t <= " +
                            std::to_string(horizon),
                        s.min_margin, 0.0, "min residual_AP - eps " + fmt(s.min_margin)));
    out.push_back({tag + tr.algorithm + ": class verifier", rep.pass, -rep.max_residual,
                   "max span residual " + fmt(rep.max_residual)});
  }
  FrontSummary g;
  std::size_t reached = 0;
  o.retain_history = false;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const RunTrace tr = run_generic(inst, 1, random_rule(seed + k), o);
    scan_ap(tr, m, horizon, inst.eps(), g);
    if (first_full_front(tr, inst.dbar())) ++reached;
  }
  const std::string d = "100 random rules, " + std::to_string(reached) + " reached J = dbar";
  out.push_back(none(tag + "generic class-1 rules: front-rate (divisor 6)", g.violations,
                     d + ", " + std::to_string(g.violations) + " violations"));
  out.push_back(above(tag + "generic class-1 rules: residual_AP > eps for t <= " +
                          std::to_string(horizon),
                      g.min_margin, 0.0, d + ", min residual_AP - eps " + fmt(g.min_margin)));
  if (shipped) *shipped = std::move(runs);
}

void front_rate_class1(const InstanceParams& base, std::uint64_t seed, std::vector<Check>& out) {
  const Instance inst(base);
  class1_suite(inst, seed, "", out);
}

// ---------------------------------------------------------------- 7
void front_rate_class2(const InstanceParams& base, std::uint64_t seed, std::vector<Check>& out) {
  const Instance inst(base);
  const std::size_t m = inst.m();
  const std::size_t horizon = nonstationary_horizon(m, inst.dbar(), 3);
  const double bound = 0.5 * inst.eps();
  RunOptions o;
  o.max_oracles = 500;
  o.sp_residual_until = horizon;
  auto margin = [&](const RunTrace& tr) {
    double mm = std::numeric_limits<double>::infinity();
    for (const TraceRow& r : tr.rows) {
      if (r.t <= horizon) mm = std::min(mm, r.residual_sp_lower - bound);
    }
    return mm;
  };

  const RunTrace ladmm = run_ladmm_class2(inst, 1.0, std::nullopt, o);
  const std::size_t v = front_rate_violations(ladmm.transcript.fronts, m, 3);
  out.push_back(none(ladmm.algorithm + ": front-rate (divisor 3)", v,
                     std::to_string(ladmm.rows.size()) + " iterates, " +
                         std::to_string(ladmm.transcript.count()) + " oracle calls, " +
                         std::to_string(v) + " violations"));
  const double lm = margin(ladmm);
  out.push_back(above(ladmm.algorithm + ": residual_SP > eps/2 for t <= " + std::to_string(horizon),
                      lm, 0.0, "min certified residual_SP - eps/2 " + fmt(lm)));
  const SpanReport rep = ladmm.verify(inst);
  out.push_back({ladmm.algorithm + ": class verifier", rep.pass, -rep.max_residual,
                 "max span residual " + fmt(rep.max_residual)});

  std::size_t gv = 0;
  std::size_t reached = 0;
  double gm = std::numeric_limits<double>::infinity();
  o.retain_history = false;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const RunTrace tr = run_generic(inst, 2, random_rule(seed + 1000 + k), o);
    gv += front_rate_violations(tr.transcript.fronts, m, 3);
    gm = std::min(gm, margin(tr));
    if (first_full_front(tr, inst.dbar())) ++reached;
  }
  const std::string d = "100 random rules, " + std::to_string(reached) + " reached J = dbar";
  out.push_back(none("generic class-2 rules: front-rate (divisor 3)", gv,
                     d + ", " + std::to_string(gv) + " violations"));
  out.push_back(above("generic class-2 rules: residual_SP > eps/2 for t <= " +
                          std::to_string(horizon),
                      gm, 0.0, d + ", min certified residual_SP - eps/2 " + fmt(gm)));
}

// ---------------------------------------------------------------- 8
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const std::pair<int, int> kSweep[] = {{2, 2}, {2, 4}, {2, 8}};

void scaling(const InstanceParams& base, std::uint64_t seed, std::vector<Check>& out) {
  std::vector<double> ms;
  std::vector<std::vector<double>> firsts(2);
  std::vector<std::string> names(2);
  bool all_reached = true;
  std::string reach_detail;
  for (const auto& [m1, m2] : kSweep) {
    const Instance inst(with_sizes(base, m1, m2));
    const std::string tag = "m=" + std::to_string(inst.m()) + " ";
    class1_suite(inst, seed, tag, out);
    // Longer runs so the front can reach dbar.
    RunOptions o;
    o.retain_history = false;
    o.max_oracles = 3 * (inst.m() * inst.dbar() + 50);
    const RunTrace runs[] = {run_penalty_class1(inst, constant_schedule(1.0), std::nullopt, o),
                             run_alm_class1(inst, 1.0, 1.0, std::nullopt, o)};
    ms.push_back(static_cast<double>(inst.m()));
    for (std::size_t a = 0; a < 2; ++a) {
      names[a] = runs[a].algorithm;
      const auto t = first_full_front(runs[a], inst.dbar());
      if (!t) all_reached = false;
      firsts[a].push_back(t ? static_cast<double>(*t) : std::nan(""));
      reach_detail += tag + runs[a].algorithm + ": " + (t ? std::to_string(*t) : "never") + "; ";
    }
  }
  out.push_back({"front reaches dbar in every run", all_reached, all_reached ? 0.0 : -1.0,
                 "first t with J = dbar: " + reach_detail});
  const double target = (static_cast<double>(base.dbar) - 2.0) / 6.0;
  for (std::size_t a = 0; a < 2; ++a) {
    const double slope = ls_slope(ms, firsts[a]);
    const double rel = std::abs(slope - target) / target;
    out.push_back(at_most(names[a] + ": slope of first t(J = dbar) vs m within 20%", rel, 0.2,
                          "slope " + fmt(slope) + " vs " + fmt(target)));
  }
}

// ---------------------------------------------------------------- 9
// Long, deliberately tuned runs whose tails reach eps-stationarity. The two
// traces are independent and run concurrently.
std::vector<Check> transfer_P(const Instance& inst) {
  const double eps = inst.eps();
  std::vector<Check> out;
  {
    std::size_t qualifying = 0, evaluated = 0, skipped = 0, bad = 0, filter_bad = 0;
    double worst = -std::numeric_limits<double>::infinity();
    RunOptions o;
    o.retain_history = false;
    o.max_oracles = 3 * 45000;
    o.observer = [&](std::size_t t, const BlockVector& x, const YVector*) {
      const StationarityReport ap = residual_AP(inst, x);
      // residual_P >= both AP components' free-multiplier relaxations, so
      // points where either exceeds eps cannot qualify.
      const double pg = ap.component("projected_gradient");
      const double feas = norm2(linops::apply(inst.layout(), OperatorTag::A, x));
      if (pg > eps || feas > eps) {
        ++skipped;
        if (t % 1000 == 0) {
          const StationarityReport p = residual_P(inst, x);
          if (p.residual < std::max(pg, feas) * (1.0 - 1e-9)) ++filter_bad;
        }
        return;
      }
      ++evaluated;
      const StationarityReport p = residual_P(inst, x);
      if (p.residual > eps) return;
      ++qualifying;
      const double ratio = ap.residual / p.residual;
      worst = std::max(worst, ratio);
      if (ap.residual > p.residual * (1.0 + 1e-6)) ++bad;
    };
    const RunTrace tr = run_alm_class1(inst, 0.1, 0.1, std::nullopt, o);
    const std::string d = tr.algorithm + " (penalty 0.1, dual step 0.1), " +
                          std::to_string(tr.rows.size()) + " iterates: " +
                          std::to_string(qualifying) + " points with residual_P <= eps, " +
                          std::to_string(evaluated) + " solved, " + std::to_string(skipped) +
                          " excluded by the relaxation";
    out.push_back(none("residual_AP <= residual_P on points with residual_P <= eps", bad,
                       d + ", max residual_AP / residual_P " + fmt(worst)));
    out.push_back({"residual_P premise is non-vacuous", qualifying > 0,
                   static_cast<double>(qualifying), d});
    out.push_back(none("residual_P relaxation filter is sound", filter_bad));
  }
  return out;
}

std::vector<Check> transfer_SP(const Instance& inst) {
  const double eps = inst.eps();
  std::vector<Check> out;
  {
    std::size_t qualifying = 0, evaluated = 0, skipped = 0, bad = 0;
    Vec previous;  // consecutive iterates are close, so warm-start the inner solve
    double worst = -std::numeric_limits<double>::infinity();
    RunOptions o;
    o.retain_history = false;
    o.max_oracles = 3 * 32000;
    o.observer = [&](std::size_t, const BlockVector& x, const YVector* y) {
      const StationarityReport ap = residual_AP(inst, x);
      // Every SP value is bounded below by the projected gradient norm and
      // by the A-feasibility norm.
      const double pg = ap.component("projected_gradient");
      const double feas = norm2(linops::apply(inst.layout(), OperatorTag::A, x));
      if (pg > eps || feas > eps) {
        ++skipped;
        return;
      }
      ++evaluated;
      InnerOptions inner;
      inner.warm_start = std::move(previous);
      const StationarityReport sp = residual_SP(inst, x, *y, inner);
      previous = sp.inner_solution;
      if (sp.residual_lower > eps) return;
      ++qualifying;
      // Compared against the certified lower value, which is the stricter test.
      const double ratio = ap.residual / sp.residual_lower;
      worst = std::max(worst, ratio);
      if (ap.residual > 2.0 * sp.residual_lower * (1.0 + 1e-6)) ++bad;
    };
    const RunTrace tr = run_ladmm_class2(inst, 0.03, std::nullopt, o);
    const std::string d = tr.algorithm + " (penalty 0.03), " + std::to_string(tr.rows.size()) +
                          " iterates: " + std::to_string(qualifying) +
                          " points with residual_SP <= eps, " + std::to_string(evaluated) +
                          " solved, " + std::to_string(skipped) + " excluded by the relaxation";
    out.push_back(none("residual_AP <= 2 residual_SP on points with residual_SP <= eps", bad,
                       d + ", max residual_AP / residual_SP " + fmt(worst)));
    out.push_back({"residual_SP premise is non-vacuous", qualifying > 0,
                   static_cast<double>(qualifying), d});
  }
  return out;
}

void transfer(const InstanceParams& base, std::uint64_t, std::vector<Check>& out) {
  const Instance inst(base);
  auto sp = std::async(std::launch::async, transfer_SP, std::cref(inst));
  for (auto& c : transfer_P(inst)) out.push_back(std::move(c));
  for (auto& c : sp.get()) out.push_back(std::move(c));
}

// ---------------------------------------------------------------- 10
void kappa_ratio(const InstanceParams& base, std::uint64_t, std::vector<Check>& out) {
  for (const auto& [m1, m2] : kSweep) {
    const Instance inst(with_sizes(base, m1, m2));
    const double kj = linops::kappa_joint(inst.layout());
    const double ka = linops::kappa_A(inst.layout());
    const double bound = 0.75 * m2;
    out.push_back({"m=" + std::to_string(inst.m()) + ": kappa_joint / kappa_A >= 3 m2 / 4",
                   kj / ka >= bound, kj / ka - bound,
                   fmt(kj) + " / " + fmt(ka) + " = " + fmt(kj / ka) + " >= " + fmt(bound)});
  }
}

struct Suite {
  const char* title;
  double budget;  // seconds
  void (*body)(const InstanceParams&, std::uint64_t, std::vector<Check>&);
};

const Suite kSuites[kNumCriteria] = {
    {"spectrum of H H^T and kappa_joint", 1.0, spectrum},
    {"gradients and Lipschitz constant", 5.0, gradients},
    {"prox operators", 2.0, proxes},
    {"support propagation", 2.0, supports},
    {"certificate chain", 5.0, certificates},
    {"front rate, oracle class 1", 10.0, front_rate_class1},
    {"front rate, oracle class 2", 10.0, front_rate_class2},
    {"scaling of the front with m", 60.0, scaling},
    {"transfer between stationarity measures", 10.0, transfer},
    {"condition number ratio", 5.0, kappa_ratio},
};

}  // namespace

CriterionResult run_criterion(int id, const InstanceParams& base, std::uint64_t seed) {
  if (id < 1 || id > kNumCriteria) {
    throw std::out_of_range("run_criterion: id must be in 1.." + std::to_string(kNumCriteria));
  }
  const Suite& suite = kSuites[id - 1];
  CriterionResult res;
  res.id = id;
  res.title = suite.title;
  const auto start = std::chrono::steady_clock::now();
  try {
    suite.body(base, seed, res.checks);
  } catch (const std::exception& e) {
    res.checks.push_back({"suite completed", false, -1.0, e.what()});
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.checks.push_back(at_most("runtime (s)", res.seconds, suite.budget));
  res.pass = std::all_of(res.checks.begin(), res.checks.end(), [](const Check& c) { return c.pass; });
  return res;
}

std::vector<CriterionResult> run_all(const InstanceParams& base, std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kNumCriteria; ++id) out.push_back(run_criterion(id, base, seed));
  return out;
}

std::string report_json(const std::vector<CriterionResult>& results) {
  json j;
  j["pass"] = std::all_of(results.begin(), results.end(),
                          [](const CriterionResult& r) { return r.pass; });
  json arr = json::array();
  for (const CriterionResult& r : results) {
    json c;
    c["id"] = r.id;
    c["title"] = r.title;
    c["pass"] = r.pass;
    c["seconds"] = r.seconds;
    json checks = json::array();
    for (const Check& k : r.checks) {
      checks.push_back({{"name", k.name}, {"pass", k.pass}, {"slack", k.slack},
                        {"detail", k.detail}});
    }
    c["checks"] = std::move(checks);
    arr.push_back(std::move(c));
  }
  j["criteria"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string bounds_json(const Instance& inst) {
  const Layout& l = inst.layout();
  const double m = static_cast<double>(l.m);
  const double dbar = static_cast<double>(l.dbar);
  const double eps = inst.eps();
  const double lf = inst.lf();
  const double kj = linops::kappa_joint(l);
  const double ka = linops::kappa_A(l);
  const double delta = inst.delta_f0_upper();

  json j;
  j["params"] = json::parse(inst.params().to_json());
  j["sizes"] = {{"m", l.m}, {"d", l.d}, {"n", l.n}, {"nbar", l.nbar}};
  j["beta"] = inst.beta();
  j["beta_threshold"] = inst.beta_threshold();
  j["norm_A"] = inst.norm_A();
  j["kappa_joint"] = kj;
  j["kappa_joint_bounds"] = {{"lower", m / 4.0}, {"upper", m}, {"holds", kj >= m / 4.0 && kj < m}};
  j["kappa_A"] = ka;
  j["kappa_ratio"] = kj / ka;
  j["kappa_ratio_bound"] = 0.75 * l.m2;
  j["kappa_ratio_holds"] = kj / ka >= 0.75 * l.m2;
  j["delta_f0_upper"] = delta;
  j["threshold_note"] = "computed with Delta_F0 upper estimate";
  json th;
  for (const auto& [key, denom] : {std::pair{"class1_constrained", 36000.0},
                                   std::pair{"class2_splitting", 72000.0},
                                   std::pair{"class2_near_stationary", 18000.0}}) {
    // The coefficient multiplies Delta_F0; it scales as eps^-2.
    const double coeff = kj * lf / (denom * pi * pi * eps * eps);
    const auto calls = static_cast<long long>(std::ceil(coeff * delta));
    th[key] = {{"coefficient", coeff}, {"oracle_calls", calls}};
  }
  j["thresholds"] = std::move(th);
  j["omega_bound"] = 150.0 * pi * eps / lf;
  json sp;
  for (const auto& [key, div] : {std::pair{"class1", 6}, std::pair{"class2", 3}}) {
    sp[key] = {{"iterations", 2.0 + m * (dbar - 2.0) / div},
               {"nonstationary_through_t", nonstationary_horizon(l.m, l.dbar, div)}};
  }
  j["support_propagation"] = std::move(sp);
  return j.dump(2) + "\n";
}

}  // namespace zerochain::suites
