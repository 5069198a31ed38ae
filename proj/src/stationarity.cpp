// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "zerochain/linops.hpp"

namespace zerochain {
namespace {

using linops::OperatorTag;
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec project(std::span<const double> w, const Vec& lo, const Vec& hi) {
  Vec out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out[k] = std::clamp(w[k], lo[k], hi[k]);
  return out;
}

double kkt_measure(const BoxLsProblem& p, std::span<const double> w, std::span<const double> g) {
  double sq = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double r = w[k] - std::clamp(w[k] - g[k], p.lo[k], p.hi[k]);
    sq += r * r;
  }
  return std::sqrt(sq);
}

// Subdifferential box of c ||.||_1 at v: fixed at c sign(v_k) when v_k != 0.
void gbar_box(std::span<const double> v, double c, std::span<double> lo, std::span<double> hi) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0.0) {
      lo[k] = -c;
      hi[k] = c;
    } else {
      lo[k] = hi[k] = v[k] > 0.0 ? c : -c;
    }
  }
}

// min_gamma ||g + H^T gamma|| by conjugate gradients on H H^T gamma = -H g.
Vec ap_multiplier(const Layout& l, const BlockVector& g) {
  Vec b = linops::apply(l, OperatorTag::H, g);
  for (double& v : b) v = -v;
  Vec x(b.size(), 0.0);
  Vec r = b;
  Vec p = r;
  double rr = dot(r, r);
  const double bn = norm2(b);
  if (bn == 0.0) return x;
  for (std::size_t it = 0; it < 10 * b.size() + 100 && std::sqrt(rr) > 1e-13 * bn; ++it) {
    Vec ap = linops::apply(l, OperatorTag::H, linops::apply(l, OperatorTag::H_adj, p));
    const double alpha = rr / dot(p, ap);
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    const double rn = dot(r, r);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + (rn / rr) * p[k];
    rr = rn;
  }
  return x;
}

void finish(StationarityReport& rep) {
  rep.residual = 0.0;
  for (const Component& c : rep.components) rep.residual = std::max(rep.residual, c.value);
}

}  // namespace

std::string_view problem_name(Problem p) {
  switch (p) {
    case Problem::P: return "P";
    case Problem::SP: return "SP";
    case Problem::AP: return "AP";
  }
  return "?";
}

double StationarityReport::component(std::string_view name) const {
  for (const Component& c : components) {
    if (c.name == name) return c.value;
  }
  throw std::out_of_range("no residual component named " + std::string(name));
}

std::string StationarityReport::to_json() const {
  nlohmann::ordered_json j;
  j["problem"] = problem_name(problem);
  nlohmann::ordered_json comps = nlohmann::ordered_json::object();
  for (const Component& c : components) comps[c.name] = c.value;
  j["components"] = comps;
  j["residual"] = residual;
  j["residual_lower"] = residual_lower;
  j["certificate_lb"] = certificate_lb;
  nlohmann::ordered_json mult = nlohmann::ordered_json::object();
  if (!gamma.empty()) mult["gamma"] = gamma;
  if (!z1.empty()) mult["z1"] = z1;
  if (!z2.empty()) mult["z2"] = z2;
  j["multipliers"] = mult;
  j["approximate"] = approximate;
  j["sqrt2_relaxation"] = sqrt2_relaxation;
  j["inner_iterations"] = inner_iterations;
  j["inner_kkt"] = inner_kkt;
  return j.dump();
}

BoxLsResult solve_box_ls(const BoxLsProblem& p, const InnerOptions& opts,
                         std::span<const double> w0) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_box_ls: tol must be positive");
  BoxLsResult res;
  Vec start = w0.empty() ? Vec(p.dim, 0.0) : Vec(w0.begin(), w0.end());
  Vec w = project(start, p.lo, p.hi);
  Vec gw = p.grad(w);
  res.kkt = kkt_measure(p, w, gw);
  if (res.kkt <= opts.tol) {
    res.w = std::move(w);
    res.converged = true;
    return res;
  }
  const double step = 1.0 / p.lipschitz;
  Vec v = w;
  double tk = 1.0;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    Vec gv = p.grad(v);
    Vec trial(p.dim);
    for (std::size_t k = 0; k < p.dim; ++k) trial[k] = v[k] - step * gv[k];
    Vec w_new = project(trial, p.lo, p.hi);
    gw = p.grad(w_new);
    res.iterations = it;
    res.kkt = kkt_measure(p, w_new, gw);
    if (res.kkt <= opts.tol) {
      res.w = std::move(w_new);
      res.converged = true;
      return res;
    }
    // Gradient-based adaptive restart.
    double test = 0.0;
    for (std::size_t k = 0; k < p.dim; ++k) test += (v[k] - w_new[k]) * (w_new[k] - w[k]);
    if (test > 0.0) {
      tk = 1.0;
      v = w_new;
    } else {
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      const double mom = (tk - 1.0) / tn;
      for (std::size_t k = 0; k < p.dim; ++k) v[k] = w_new[k] + mom * (w_new[k] - w[k]);
      tk = tn;
    }
    w = std::move(w_new);
  }
  res.w = std::move(w);
  res.converged = false;
  return res;
}

StationarityReport residual_AP(const Instance& inst, const BlockVector& x) {
  const Layout& l = inst.layout();
  StationarityReport rep;
  rep.problem = Problem::AP;
  const BlockVector g = inst.grad_f0(x);
  rep.components.push_back({"consensus", norm2(linops::apply(l, OperatorTag::H, x))});
  rep.components.push_back({"projected_gradient", norm2(linops::null_project_H(g))});
  rep.gamma = ap_multiplier(l, g);
  rep.certificate_lb = certificate_lb(inst, x);
  finish(rep);
  rep.residual_lower = rep.residual;
  return rep;
}

StationarityReport residual_P(const Instance& inst, const BlockVector& x,
                              const InnerOptions& opts) {
  const Layout& l = inst.layout();
  const std::size_t n = l.n;
  const std::size_t nb = l.nbar;
  const BlockVector r = inst.grad_f0(x);
  const Vec ax = linops::apply(l, OperatorTag::A, x);
  const Vec abx = linops::apply(l, OperatorTag::Abar, x);

  BoxLsProblem p;
  p.dim = n + nb;
  p.lo.assign(p.dim, -kInf);
  p.hi.assign(p.dim, kInf);
  gbar_box(abx, inst.gbar_weight(), std::span<double>(p.lo).subspan(n),
           std::span<double>(p.hi).subspan(n));
  auto resid = [&](std::span<const double> w) {
    Vec res = r.values();
    axpy(1.0, linops::apply(l, OperatorTag::A_adj, w.subspan(0, n)), res);
    axpy(1.0, linops::apply(l, OperatorTag::Abar_adj, w.subspan(n)), res);
    return res;
  };
  p.grad = [&](std::span<const double> w) {
    const Vec res = resid(w);
    Vec g = linops::apply(l, OperatorTag::A, res);
    const Vec gb = linops::apply(l, OperatorTag::Abar, res);
    g.insert(g.end(), gb.begin(), gb.end());
    return g;
  };
  p.value = [&](std::span<const double> w) {
    const double v = norm2(resid(w));
    return 0.5 * v * v;
  };
  p.lipschitz = 1.01 * inst.norm_H() * inst.norm_H();
  const BoxLsResult sol =
      solve_box_ls(p, opts, opts.warm_start.size() == p.dim ? std::span<const double>(opts.warm_start)
                                                            : std::span<const double>());

  StationarityReport rep;
  rep.problem = Problem::P;
  rep.components.push_back({"subgradient_distance", norm2(resid(sol.w))});
  rep.components.push_back({"feasibility_A", norm2(ax)});
  rep.gamma.assign(sol.w.begin(), sol.w.begin() + static_cast<std::ptrdiff_t>(n));
  rep.approximate = !sol.converged;
  rep.inner_iterations = sol.iterations;
  rep.inner_kkt = sol.kkt;
  rep.inner_solution = sol.w;
  rep.certificate_lb = certificate_lb(inst, x);
  finish(rep);
  rep.residual_lower = rep.residual;
  return rep;
}

StationarityReport residual_SP(const Instance& inst, const BlockVector& x, const YVector& y,
                               const InnerOptions& opts) {
  const Layout& l = inst.layout();
  const std::size_t n = l.n;
  const std::size_t nb = l.nbar;
  if (y.size() != nb) throw std::invalid_argument("residual_SP: y has the wrong length");
  const BlockVector r = inst.grad_f0(x);
  const Vec ax = linops::apply(l, OperatorTag::A, x);
  const Vec abx = linops::apply(l, OperatorTag::Abar, x);

  // w = (z1, z2, u) with u boxed by the subdifferential of gbar at y.
  BoxLsProblem p;
  p.dim = nb + n + nb;
  p.lo.assign(p.dim, -kInf);
  p.hi.assign(p.dim, kInf);
  gbar_box(y, inst.gbar_weight(), std::span<double>(p.lo).subspan(nb + n),
           std::span<double>(p.hi).subspan(nb + n));
  auto resid = [&](std::span<const double> w) {
    Vec res = r.values();
    axpy(1.0, linops::apply(l, OperatorTag::Abar_adj, w.subspan(0, nb)), res);
    axpy(1.0, linops::apply(l, OperatorTag::A_adj, w.subspan(nb, n)), res);
    return res;
  };
  auto gap = [&](std::span<const double> w) {
    return sub(w.subspan(0, nb), w.subspan(nb + n, nb));
  };
  p.grad = [&](std::span<const double> w) {
    const Vec res = resid(w);
    const Vec dz = gap(w);
    Vec g = linops::apply(l, OperatorTag::Abar, res);
    axpy(1.0, dz, g);
    const Vec ga = linops::apply(l, OperatorTag::A, res);
    g.insert(g.end(), ga.begin(), ga.end());
    for (double v : dz) g.push_back(-v);
    return g;
  };
  p.value = [&](std::span<const double> w) {
    const double a = norm2(resid(w));
    const double b = norm2(gap(w));
    return 0.5 * (a * a + b * b);
  };
  p.lipschitz = 1.01 * (inst.norm_H() * inst.norm_H() + 2.0);
  const BoxLsResult sol =
      solve_box_ls(p, opts, opts.warm_start.size() == p.dim ? std::span<const double>(opts.warm_start)
                                                            : std::span<const double>());

  StationarityReport rep;
  rep.problem = Problem::SP;
  const double dist = norm2(gap(sol.w));
  const double lag = norm2(resid(sol.w));
  const double feas_y = norm2(sub(y, abx));
  const double feas_a = norm2(ax);
  rep.components.push_back({"dist_gbar", dist});
  rep.components.push_back({"grad_lagrangian", lag});
  rep.components.push_back({"feasibility_y", feas_y});
  rep.components.push_back({"feasibility_A", feas_a});
  rep.z1.assign(sol.w.begin(), sol.w.begin() + static_cast<std::ptrdiff_t>(nb));
  rep.z2.assign(sol.w.begin() + static_cast<std::ptrdiff_t>(nb),
                sol.w.begin() + static_cast<std::ptrdiff_t>(nb + n));
  rep.approximate = !sol.converged;
  rep.sqrt2_relaxation = true;
  rep.inner_iterations = sol.iterations;
  rep.inner_kkt = sol.kkt;
  rep.inner_solution = sol.w;
  rep.certificate_lb = certificate_lb(inst, x);
  finish(rep);
  // For any (z1, z2): max(dist, lag) >= sqrt((dist^2 + lag^2) / 2) >= sqrt(min objective).
  rep.residual_lower = std::max({std::sqrt(p.value(sol.w)) * (1.0 - 1e-12), feas_y, feas_a});
  return rep;
}

double certificate_lb(const Instance& inst, const BlockVector& x) {
  const Vec xbar = linops::block_average(x);
  const std::size_t m = inst.m();
  Vec sum(inst.dbar(), 0.0);
  for (std::size_t i = 1; i <= m; ++i) axpy(1.0, inst.grad_f(i, xbar), sum);
  for (double& v : sum) v /= static_cast<double>(m);
  return 0.5 * std::sqrt(static_cast<double>(m)) * norm2(sum);
}

std::optional<std::size_t> small_coordinate_witness(const Instance& inst, const BlockVector& x) {
  const Vec xbar = linops::block_average(x);
  const double thr = inst.small_coordinate_threshold();
  for (std::size_t j = 0; j < xbar.size(); ++j) {
    if (std::abs(xbar[j]) < thr) return j + 1;
  }
  return std::nullopt;
}

}  // namespace zerochain
