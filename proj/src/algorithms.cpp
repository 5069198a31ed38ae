// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/algorithms.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <stdexcept>

#include "zerochain/linops.hpp"
#include "zerochain/stationarity.hpp"

namespace zerochain {
namespace {

using linops::OperatorTag;

// Shared bookkeeping for one run: trace rows, fronts and divergence guard.
class Recorder {
 public:
  Recorder(const Instance& inst, Oracle& oracle, RunTrace& trace, const RunOptions& opts)
      : inst_(inst), oracle_(oracle), trace_(trace), opts_(opts) {}

  void record(std::size_t t, const BlockVector& x, const YVector* y) {
    const double nx = norm2(x);
    if (!std::isfinite(nx) || nx > opts_.divergence_limit) {
      throw DivergenceError(trace_.algorithm + ": iterate norm " + std::to_string(nx) +
                            " exceeds " + std::to_string(opts_.divergence_limit) +
                            " at t = " + std::to_string(t));
    }
    TraceRow row;
    row.t = t;
    row.oracle_count = oracle_.count();
    row.front = support_front(x);
    if (y) row.front = std::max(row.front, support_front(*y));
    const StationarityReport ap = residual_AP(inst_, x);
    row.residual_ap = ap.residual;
    row.certificate_lb = ap.certificate_lb;
    row.objective = inst_.objective(x);
    if (y && t <= opts_.sp_residual_until) {
      const StationarityReport sp = residual_SP(inst_, x, *y);
      row.residual_sp = sp.residual;
      row.residual_sp_lower = sp.residual_lower;
    }
    if (opts_.observer) opts_.observer(t, x, y);
    oracle_.record_iterate(row.front);
    trace_.rows.push_back(row);
  }

 private:
  const Instance& inst_;
  Oracle& oracle_;
  RunTrace& trace_;
  const RunOptions& opts_;
};

void finish(RunTrace& trace, Oracle& oracle, const BlockVector& x, const YVector& y) {
  trace.transcript = oracle.transcript();
  trace.x_final = x;
  trace.y_final = y;
}

BlockVector as_block(const Instance& inst, Vec v) {
  return BlockVector(inst.m(), inst.dbar(), std::move(v));
}

// Normalized copy of v appended to gens unless v is exactly zero.
void push_generator(std::vector<Vec>& gens, std::span<const double> v) {
  const double nv = norm2(v);
  if (nv == 0.0) return;
  gens.push_back(scaled(1.0 / nv, v));
}

Vec combine(const std::vector<Vec>& gens, const Vec& coeffs, std::size_t dim) {
  Vec out(dim, 0.0);
  for (std::size_t k = 0; k < gens.size() && k < coeffs.size(); ++k) {
    if (coeffs[k] != 0.0) axpy(coeffs[k], gens[k], out);
  }
  return out;
}

Vec lincomb(double a, std::span<const double> u, double b, std::span<const double> v) {
  Vec out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = a * u[k] + b * v[k];
  return out;
}

}  // namespace

Schedule constant_schedule(double value) {
  return [value](std::size_t) { return value; };
}

std::string RunTrace::to_csv() const {
  std::string out = "t,oracle_count,J,residual_AP,certificate_lb,F0,residual_SP,residual_SP_lower\n";
  char buf[256];
  for (const TraceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%d,%.17g,%.17g,%.17g,", r.t, r.oracle_count, r.front,
                  r.residual_ap, r.certificate_lb, r.objective);
    out += buf;
    if (std::isfinite(r.residual_sp)) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", r.residual_sp, r.residual_sp_lower);
      out += buf;
    } else {
      out += ',';
    }
    out += '\n';
  }
  return out;
}

SpanReport RunTrace::verify(const Instance& inst) const {
  if (history1) return verify_class1(inst, *history1);
  if (history2) return verify_class2(inst, *history2);
  throw std::logic_error(algorithm + ": no retained history to verify");
}

void RunTrace::attach(const SpanReport& report) {
  for (std::size_t k = 0; k < report.residuals.size(); ++k) {
    const std::size_t t = k + 1;
    if (t < transcript.span_residuals.size()) transcript.span_residuals[t] = report.residuals[k];
  }
  if (!transcript.span_residuals.empty()) transcript.span_residuals[0] = 0.0;
}

RunTrace run_penalty_class1(const Instance& inst, const Schedule& rho,
                            const std::optional<Schedule>& eta, const RunOptions& opts) {
  if (opts.max_oracles < 1) throw std::invalid_argument("max_oracles must be >= 1");
  RunTrace trace;
  trace.algorithm = "penalty";
  trace.class_id = 1;
  trace.hyperparameters = {{"rho0", rho(0)}};
  if (eta) trace.hyperparameters.push_back({"eta0", (*eta)(0)});
  Oracle oracle(inst);
  Recorder rec(inst, oracle, trace, opts);
  BlockVector x = inst.zeros_x();
  const Vec zero_n(inst.layout().n, 0.0);
  const double na2 = inst.norm_A() * inst.norm_A();
  trace.history1 = Class1History{x, {}, !opts.retain_history};
  rec.record(0, x, nullptr);
  for (std::size_t t = 1; oracle.count() + 3 <= opts.max_oracles; ++t) {
    const double r = rho(t - 1);
    const double e = eta ? (*eta)(t - 1) : 1.0 / (inst.lf() + r * na2);
    if (!(r >= 0.0) || !(e > 0.0)) throw std::invalid_argument("penalty: schedules must be positive");
    const OracleBundle1 b1 = oracle.call1(x, zero_n, e);
    const OracleBundle1 b2 = oracle.call1(x, b1.a_x, e);
    BlockVector xi = x;
    for (std::size_t k = 0; k < xi.size(); ++k) xi[k] -= e * (b1.grad_f0[k] + r * b2.at_z[k]);
    const OracleBundle1 b3 = oracle.call1(xi, zero_n, e);
    x = b3.prox_g;
    if (opts.retain_history) trace.history1->steps.push_back({std::move(xi), e, x});
    rec.record(t, x, nullptr);
  }
  finish(trace, oracle, x, inst.zeros_y());
  return trace;
}

RunTrace run_alm_class1(const Instance& inst, double penalty, double dual_step,
                        const std::optional<double>& eta, const RunOptions& opts) {
  if (opts.max_oracles < 1) throw std::invalid_argument("max_oracles must be >= 1");
  if (penalty < 0.0 || dual_step < 0.0) throw std::invalid_argument("alm: penalty and dual step must be >= 0");
  const double e = eta ? *eta : 1.0 / (inst.lf() + penalty * inst.norm_A() * inst.norm_A());
  if (!(e > 0.0)) throw std::invalid_argument("alm: eta must be positive");
  RunTrace trace;
  trace.algorithm = "alm";
  trace.class_id = 1;
  trace.hyperparameters = {{"penalty", penalty}, {"dual_step", dual_step}, {"eta", e}};
  Oracle oracle(inst);
  Recorder rec(inst, oracle, trace, opts);
  BlockVector x = inst.zeros_x();
  BlockVector w = inst.zeros_x();  // A^T z, z0 = 0
  const Vec zero_n(inst.layout().n, 0.0);
  trace.history1 = Class1History{x, {}, !opts.retain_history};
  rec.record(0, x, nullptr);
  for (std::size_t t = 1; oracle.count() + 3 <= opts.max_oracles; ++t) {
    const OracleBundle1 b1 = oracle.call1(x, zero_n, e);
    const OracleBundle1 b2 = oracle.call1(x, b1.a_x, e);
    BlockVector xi = x;
    for (std::size_t k = 0; k < xi.size(); ++k) {
      xi[k] -= e * (b1.grad_f0[k] + w[k] + penalty * b2.at_z[k]);
    }
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += dual_step * b2.at_z[k];
    const OracleBundle1 b3 = oracle.call1(xi, zero_n, e);
    x = b3.prox_g;
    if (opts.retain_history) trace.history1->steps.push_back({std::move(xi), e, x});
    rec.record(t, x, nullptr);
  }
  finish(trace, oracle, x, inst.zeros_y());
  return trace;
}

RunTrace run_ladmm_class2(const Instance& inst, double penalty, const std::optional<Schedule>& eta,
                          const RunOptions& opts) {
  if (opts.max_oracles < 1) throw std::invalid_argument("max_oracles must be >= 1");
  if (!(penalty > 0.0)) throw std::invalid_argument("ladmm: penalty must be positive");
  const Layout& l = inst.layout();
  const double na = inst.norm_A();
  const double nab = linops::opnorm(l, OperatorTag::Abar);
  const double e_default = 1.0 / (inst.lf() + penalty * nab * nab + penalty * na * na);
  RunTrace trace;
  trace.algorithm = "ladmm";
  trace.class_id = 2;
  trace.hyperparameters = {{"penalty", penalty}, {"eta0", eta ? (*eta)(0) : e_default}};
  Oracle oracle(inst);
  Recorder rec(inst, oracle, trace, opts);
  BlockVector x = inst.zeros_x();
  YVector y = inst.zeros_y();
  YVector lambda = inst.zeros_y();
  BlockVector abar_t_lambda = inst.zeros_x();
  BlockVector w2 = inst.zeros_x();  // A^T lambda2
  const Vec zero_n(l.n, 0.0);
  const double prox_eta = 1.0 / penalty;
  trace.history2 = Class2History{x, y, {}, !opts.retain_history};
  rec.record(0, x, &y);
  for (std::size_t t = 1; oracle.count() + 3 <= opts.max_oracles; ++t) {
    const double e = eta ? (*eta)(t - 1) : e_default;
    if (!(e > 0.0)) throw std::invalid_argument("ladmm: eta must be positive");
    const OracleBundle2 b1 = oracle.call2(x, y, zero_n, prox_eta);
    const OracleBundle2 b2 = oracle.call2(x, b1.abar_x, b1.a_x, prox_eta);
    // b2.abar_t_y = Abar^T Abar x, b2.at_z = A^T A x.
    for (std::size_t k = 0; k < lambda.size(); ++k) lambda[k] += penalty * (b1.abar_x[k] - y[k]);
    for (std::size_t k = 0; k < x.size(); ++k) {
      abar_t_lambda[k] += penalty * (b2.abar_t_y[k] - b1.abar_t_y[k]);
      w2[k] += penalty * b2.at_z[k];
    }
    BlockVector x_new = x;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double grad = b1.grad_f0[k] + abar_t_lambda[k] + w2[k] +
                          penalty * (b2.abar_t_y[k] - b1.abar_t_y[k]) + penalty * b2.at_z[k];
      x_new[k] -= e * grad;
    }
    YVector xi = b1.abar_x;
    for (std::size_t k = 0; k < xi.size(); ++k) xi[k] += lambda[k] / penalty;
    const OracleBundle2 b3 = oracle.call2(x, xi, zero_n, prox_eta);
    x = std::move(x_new);
    y = b3.prox_gbar;
    if (opts.retain_history) trace.history2->steps.push_back({x, std::move(xi), prox_eta, y});
    rec.record(t, x, &y);
  }
  finish(trace, oracle, x, y);
  return trace;
}

UpdateRule zero_rule() {
  return [](const GenericContext& ctx) {
    GenericDecision d;
    d.x_coeffs.assign(ctx.x_gen ? ctx.x_gen->size() : 0, 0.0);
    d.y_coeffs.assign(ctx.y_gen ? ctx.y_gen->size() : 0, 0.0);
    d.a = 0.0;
    d.b = 0.0;
    return d;
  };
}

UpdateRule random_rule(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const GenericContext& ctx) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> step(0.01, 2.0);
    GenericDecision d;
    for (std::size_t k = 0; ctx.x_gen && k < ctx.x_gen->size(); ++k) d.x_coeffs.push_back(normal(*rng));
    for (std::size_t k = 0; ctx.y_gen && k < ctx.y_gen->size(); ++k) d.y_coeffs.push_back(normal(*rng));
    d.a = normal(*rng);
    d.b = normal(*rng);
    d.eta = step(*rng);
    return d;
  };
}

RunTrace run_generic(const Instance& inst, int class_id, const UpdateRule& rule,
                     const RunOptions& opts) {
  if (class_id != 1 && class_id != 2) throw std::invalid_argument("class_id must be 1 or 2");
  if (opts.max_oracles < 1) throw std::invalid_argument("max_oracles must be >= 1");
  const Layout& l = inst.layout();
  RunTrace trace;
  trace.algorithm = class_id == 1 ? "generic1" : "generic2";
  trace.class_id = class_id;
  Oracle oracle(inst);
  Recorder rec(inst, oracle, trace, opts);
  BlockVector x = inst.zeros_x();
  YVector y = inst.zeros_y();
  const Vec zero_n(l.n, 0.0);
  std::vector<Vec> xg;
  std::vector<Vec> yg;
  GenericContext ctx;
  ctx.x_gen = &xg;
  ctx.y_gen = class_id == 2 ? &yg : nullptr;
  ctx.d = l.d;
  ctx.nbar = l.nbar;

  if (class_id == 1) {
    trace.history1 = Class1History{x, {}, !opts.retain_history};
    rec.record(0, x, nullptr);
    for (std::size_t t = 1; oracle.count() + 3 <= opts.max_oracles; ++t) {
      const OracleBundle1 b1 = oracle.call1(x, zero_n, 1.0);
      const OracleBundle1 b2 = oracle.call1(x, b1.a_x, 1.0);
      push_generator(xg, x);
      push_generator(xg, b1.grad_f0);
      push_generator(xg, b2.at_z);
      ctx.t = t;
      ctx.x_current = &x;
      const GenericDecision dec = rule(ctx);
      BlockVector xi = as_block(inst, combine(xg, dec.x_coeffs, l.d));
      const OracleBundle1 b3 = oracle.call1(xi, zero_n, dec.eta);
      BlockVector x_new = as_block(inst, lincomb(dec.a, xi, dec.b, b3.prox_g));
      if (dec.inject_x) axpy(1.0, *dec.inject_x, x_new);
      x = std::move(x_new);
      if (opts.retain_history) trace.history1->steps.push_back({std::move(xi), dec.eta, x});
      rec.record(t, x, nullptr);
    }
  } else {
    trace.history2 = Class2History{x, y, {}, !opts.retain_history};
    rec.record(0, x, &y);
    const std::size_t nb = l.rows_m.size();
    for (std::size_t t = 1; oracle.count() + 4 <= opts.max_oracles; ++t) {
      const OracleBundle2 b1 = oracle.call2(x, y, zero_n, 1.0);
      const OracleBundle2 b2 = oracle.call2(x, b1.abar_x, b1.a_x, 1.0);
      const OracleBundle2 b3 = oracle.call2(b1.abar_t_y, y, zero_n, 1.0);
      push_generator(xg, x);
      push_generator(xg, b1.grad_f0);
      push_generator(xg, b2.at_z);
      push_generator(xg, b2.abar_t_y);
      push_generator(xg, b1.abar_t_y);
      push_generator(yg, y);
      push_generator(yg, b3.abar_x);  // Abar Abar^T y
      push_generator(yg, b1.abar_x);
      ctx.t = t;
      ctx.x_current = &x;
      ctx.y_current = &y;
      const GenericDecision dec = rule(ctx);
      BlockVector x_new = as_block(inst, combine(xg, dec.x_coeffs, l.d));
      if (dec.inject_x) axpy(1.0, *dec.inject_x, x_new);
      YVector xi(nb, l.dbar, combine(yg, dec.y_coeffs, l.nbar));
      const OracleBundle2 b4 = oracle.call2(x_new, xi, zero_n, dec.eta);
      x = std::move(x_new);
      y = YVector(nb, l.dbar, lincomb(dec.a, xi, dec.b, b4.prox_gbar));
      if (opts.retain_history) trace.history2->steps.push_back({x, std::move(xi), dec.eta, y});
      rec.record(t, x, &y);
    }
  }
  finish(trace, oracle, x, y);
  return trace;
}

}  // namespace zerochain
