// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/oracle.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "json.hpp"
#include "zerochain/linops.hpp"
#include "zerochain/prox.hpp"

namespace zerochain {
namespace {

using linops::OperatorTag;

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
      h_ ^= p[k];
      h_ *= 0x100000001b3ull;
    }
  }
  void reals(std::span<const double> v) { bytes(v.data(), v.size() * sizeof(double)); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

void require_eta(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("oracle: eta must be positive");
}

void require_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string("oracle: ") + what + " has length " +
                                std::to_string(got) + ", expected " + std::to_string(want));
  }
}

template <class V>
int front_of(const V& v) {
  int front = 0;
  for (std::size_t i = 0; i < v.num_blocks(); ++i) {
    auto b = v.block(i);
    for (std::size_t j = b.size(); j-- > 0;) {
      if (b[j] != 0.0) {
        front = std::max(front, static_cast<int>(j + 1));
        break;
      }
    }
  }
  return front;
}

bool within(double residual, double tol, std::span<const double> target) {
  return residual <= tol * (1.0 + norm2(target));
}

}  // namespace

std::string OracleTranscript::to_jsonl() const {
  std::string out;
  for (const OracleCall& c : calls) {
    nlohmann::ordered_json j;
    j["t"] = c.t;
    j["kind"] = c.kind;
    j["eta"] = c.eta;
    if (c.t < fronts.size()) {
      j["J"] = fronts[c.t];
    } else {
      j["J"] = nullptr;
    }
    if (c.t < span_residuals.size() && std::isfinite(span_residuals[c.t])) {
      j["span_residual"] = span_residuals[c.t];
    } else {
      j["span_residual"] = nullptr;
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

int support_front(const BlockVector& x) { return front_of(x); }
int support_front(const YVector& y) { return front_of(y); }

OracleBundle1 Oracle::call1(const BlockVector& x, std::span<const double> z, double eta) {
  require_eta(eta);
  const Layout& l = inst_->layout();
  require_len(x.size(), l.d, "x");
  require_len(z.size(), l.n, "z");
  OracleBundle1 out{inst_->grad_f0(x), linops::apply(l, OperatorTag::A, x),
                    BlockVector(l.m, l.dbar, linops::apply(l, OperatorTag::A_adj, z)),
                    prox::prox_g(*inst_, x, eta)};
  Fnv1a h;
  h.reals(x);
  h.reals(z);
  h.bytes(&eta, sizeof eta);
  transcript_.calls.push_back({transcript_.fronts.size(), 1, h.value(), eta});
  return out;
}

OracleBundle2 Oracle::call2(const BlockVector& x, const YVector& y,
                            std::span<const double> z, double eta) {
  require_eta(eta);
  const Layout& l = inst_->layout();
  require_len(x.size(), l.d, "x");
  require_len(y.size(), l.nbar, "y");
  require_len(z.size(), l.n, "z");
  const std::size_t nb = l.rows_m.size();
  OracleBundle2 out{inst_->grad_f0(x),
                    YVector(nb, l.dbar, linops::apply(l, OperatorTag::Abar, x)),
                    linops::apply(l, OperatorTag::A, x),
                    BlockVector(l.m, l.dbar, linops::apply(l, OperatorTag::Abar_adj, y)),
                    BlockVector(l.m, l.dbar, linops::apply(l, OperatorTag::A_adj, z)),
                    prox::prox_gbar(*inst_, y, eta)};
  Fnv1a h;
  h.reals(x);
  h.reals(y);
  h.reals(z);
  h.bytes(&eta, sizeof eta);
  transcript_.calls.push_back({transcript_.fronts.size(), 2, h.value(), eta});
  return out;
}

void Oracle::record_iterate(int front) {
  transcript_.fronts.push_back(front);
  transcript_.span_residuals.push_back(std::nan(""));
}

void SpanBasis::add(std::span<const double> v) {
  if (v.size() != dim_) throw std::invalid_argument("SpanBasis: dimension mismatch");
  const double nv = norm2(v);
  if (nv == 0.0) return;
  Vec r(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) r[k] = v[k] / nv;
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vec& q : basis_) axpy(-dot(q, r), q, r);
  }
  const double nr = norm2(r);
  if (nr <= drop_tol_) return;
  for (double& e : r) e /= nr;
  basis_.push_back(std::move(r));
}

double SpanBasis::residual(std::span<const double> v) const {
  if (v.size() != dim_) throw std::invalid_argument("SpanBasis: dimension mismatch");
  Vec r(v.begin(), v.end());
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vec& q : basis_) axpy(-dot(q, r), q, r);
  }
  return norm2(r);
}

SpanReport verify_class1(const Instance& inst, const Class1History& history, double rel_tol) {
  if (history.truncated) {
    throw std::logic_error("verify_class1: history truncated; span verification needs every iterate");
  }
  const Layout& l = inst.layout();
  SpanReport rep;
  SpanBasis basis(l.d);
  const BlockVector* prev = &history.x0;
  for (std::size_t t = 1; t <= history.steps.size(); ++t) {
    const Class1Step& st = history.steps[t - 1];
    basis.add(*prev);
    basis.add(inst.grad_f0(*prev));
    basis.add(linops::apply(l, OperatorTag::AtA, *prev));

    const double r_xi = basis.residual(st.xi);
    bool ok = within(r_xi, rel_tol, st.xi);

    SpanBasis local(l.d);
    local.add(st.xi);
    local.add(prox::prox_g(inst, st.xi, st.eta));
    const double r_x = local.residual(st.x);
    ok = ok && within(r_x, rel_tol, st.x);

    const double r = std::max(r_xi, r_x);
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
    if (!ok && !rep.first_failure) {
      rep.first_failure = t;
      rep.pass = false;
    }
    prev = &st.x;
  }
  return rep;
}

SpanReport verify_class2(const Instance& inst, const Class2History& history, double rel_tol) {
  if (history.truncated) {
    throw std::logic_error("verify_class2: history truncated; span verification needs every iterate");
  }
  const Layout& l = inst.layout();
  SpanReport rep;
  SpanBasis xb(l.d);
  SpanBasis yb(l.nbar);
  const BlockVector* px = &history.x0;
  const YVector* py = &history.y0;
  for (std::size_t t = 1; t <= history.steps.size(); ++t) {
    const Class2Step& st = history.steps[t - 1];
    xb.add(*px);
    xb.add(inst.grad_f0(*px));
    xb.add(linops::apply(l, OperatorTag::AtA, *px));
    xb.add(linops::apply(l, OperatorTag::AbarTAbar, *px));
    xb.add(linops::apply(l, OperatorTag::Abar_adj, *py));
    yb.add(*py);
    yb.add(linops::apply(l, OperatorTag::AbarAbarT, *py));
    yb.add(linops::apply(l, OperatorTag::Abar, *px));

    const double r_x = xb.residual(st.x);
    const double r_xi = yb.residual(st.xi);
    bool ok = within(r_x, rel_tol, st.x) && within(r_xi, rel_tol, st.xi);

    SpanBasis local(l.nbar);
    local.add(st.xi);
    local.add(prox::prox_gbar(inst, st.xi, st.eta));
    const double r_y = local.residual(st.y);
    ok = ok && within(r_y, rel_tol, st.y);

    const double r = std::max({r_x, r_xi, r_y});
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
    if (!ok && !rep.first_failure) {
      rep.first_failure = t;
      rep.pass = false;
    }
    px = &st.x;
    py = &st.y;
  }
  return rep;
}

std::size_t front_rate_violations(std::span<const int> fronts, std::size_t m, int divisor) {
  std::size_t bad = 0;
  for (std::size_t t = 0; t < fronts.size(); ++t) {
    const int J = fronts[t];
    if (J < 2) continue;
    const std::size_t need = 2 * static_cast<std::size_t>(divisor) + m * static_cast<std::size_t>(J - 2);
    if (static_cast<std::size_t>(divisor) * t < need) ++bad;
  }
  return bad;
}

int front_staircase(std::size_t t, std::size_t m, std::size_t dbar, int divisor) {
  if (t == 0) return 0;
  int best = 1;
  for (std::size_t J = 2; J <= dbar; ++J) {
    if (static_cast<std::size_t>(divisor) * t >= 2 * static_cast<std::size_t>(divisor) + m * (J - 2)) {
      best = static_cast<int>(J);
    }
  }
  return best;
}

}  // namespace zerochain
