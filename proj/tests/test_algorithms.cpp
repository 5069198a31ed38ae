// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "zerochain/algorithms.hpp"
#include "zerochain/linops.hpp"
#include "zerochain/stationarity.hpp"

using namespace zerochain;

namespace {

RunOptions budget(std::size_t n) {
  RunOptions o;
  o.max_oracles = n;
  return o;
}

}  // namespace

TEST_SUITE("algorithms") {
  TEST_CASE("penalty method from zero") {
    const Instance inst(zctest::c0());
    const RunTrace tr = run_penalty_class1(inst, constant_schedule(1.0), std::nullopt, budget(500));
    REQUIRE(tr.rows.size() == 167);
    CHECK(tr.transcript.count() == 498);
    CHECK(tr.rows[0].oracle_count == 0);
    CHECK(tr.rows[1].front == 1);
    for (std::size_t k = 1; k < tr.rows.size(); ++k) {
      CHECK(tr.rows[k].oracle_count > tr.rows[k - 1].oracle_count);
      CHECK(tr.rows[k].t == k);
    }
    for (const TraceRow& r : tr.rows) {
      if (r.t <= 7) CHECK(r.residual_ap > inst.eps());
    }
    CHECK(front_rate_violations(tr.transcript.fronts, 12, 6) == 0);
    const SpanReport rep = tr.verify(inst);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-10);
  }

  TEST_CASE("ALM verifies and respects the front rate") {
    const Instance inst(zctest::c0());
    const RunTrace tr = run_alm_class1(inst, 1.0, 0.5, std::nullopt, budget(300));
    CHECK(tr.verify(inst).pass);
    CHECK(front_rate_violations(tr.transcript.fronts, 12, 6) == 0);
  }

  TEST_CASE("ALM without penalty or dual step is the plain gradient method") {
    const Instance inst(zctest::c0());
    const RunTrace alm = run_alm_class1(inst, 0.0, 0.0, std::nullopt, budget(120));
    const RunTrace pen = run_penalty_class1(inst, constant_schedule(0.0), std::nullopt, budget(120));
    REQUIRE(alm.rows.size() == pen.rows.size());
    for (std::size_t k = 0; k < alm.rows.size(); ++k) {
      CHECK(alm.rows[k].residual_ap == pen.rows[k].residual_ap);
      CHECK(alm.rows[k].front == pen.rows[k].front);
    }
    CHECK(alm.x_final == pen.x_final);
  }

  TEST_CASE("linearized ADMM from zero") {
    const Instance inst(zctest::c0());
    RunOptions o = budget(500);
    o.sp_residual_until = 13;
    const RunTrace tr = run_ladmm_class2(inst, 1.0, std::nullopt, o);
    for (const TraceRow& r : tr.rows) {
      if (r.t <= 13) {
        CHECK(r.residual_sp_lower > 0.5 * inst.eps());
        CHECK(r.residual_sp >= r.residual_sp_lower);
      } else {
        CHECK(std::isnan(r.residual_sp));
      }
    }
    CHECK(front_rate_violations(tr.transcript.fronts, 12, 3) == 0);
    const SpanReport rep = tr.verify(inst);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-10);
    CHECK(tr.transcript.calls.front().kind == 2);
  }

  TEST_CASE("generic rules") {
    const Instance inst(zctest::c0());
    for (int cls : {1, 2}) {
      const RunTrace zero = run_generic(inst, cls, zero_rule(), budget(200));
      for (const TraceRow& r : zero.rows) CHECK(r.front == 0);
      CHECK(zero.verify(inst).pass);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const RunTrace tr = run_generic(inst, cls, random_rule(seed), budget(300));
        CHECK(front_rate_violations(tr.transcript.fronts, 12, cls == 1 ? 6 : 3) == 0);
        CHECK(tr.verify(inst).pass);
      }
    }
  }

  TEST_CASE("a rule injecting an out-of-span vector fails verification") {
    const Instance inst(zctest::c0());
    const UpdateRule base = random_rule(42);
    for (int cls : {1, 2}) {
      UpdateRule rule = [&](const GenericContext& ctx) {
        GenericDecision d = base(ctx);
        if (ctx.t == 4) {
          Vec e(ctx.d, 0.0);
          e[ctx.d - 1] = 1.0;  // last coordinate of the last block
          d.inject_x = e;
        }
        return d;
      };
      const SpanReport rep = run_generic(inst, cls, rule, budget(60)).verify(inst);
      CHECK_FALSE(rep.pass);
      REQUIRE(rep.first_failure.has_value());
      CHECK(*rep.first_failure == 4);
    }
  }

  TEST_CASE("divergence guard") {
    const Instance inst(zctest::c0());
    CHECK_THROWS_AS(run_penalty_class1(inst, constant_schedule(1.0), constant_schedule(1e3), budget(3000)),
                    DivergenceError);
  }

  TEST_CASE("input validation") {
    const Instance inst(zctest::c0());
    CHECK_THROWS_AS(run_penalty_class1(inst, constant_schedule(1.0), std::nullopt, budget(0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_generic(inst, 3, zero_rule(), budget(10)), std::invalid_argument);
  }

  TEST_CASE("CSV export has one row per iterate") {
    const Instance inst(zctest::c0());
    const RunTrace tr = run_penalty_class1(inst, constant_schedule(1.0), std::nullopt, budget(30));
    std::istringstream in(tr.to_csv());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,oracle_count,J,residual_AP,certificate_lb,F0,residual_SP,residual_SP_lower");
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    CHECK(n == tr.rows.size());
  }

  TEST_CASE("runs are deterministic") {
    const Instance inst(zctest::c0());
    const RunTrace a = run_ladmm_class2(inst, 1.0, std::nullopt, budget(150));
    const RunTrace b = run_ladmm_class2(inst, 1.0, std::nullopt, budget(150));
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.transcript.to_jsonl() == b.transcript.to_jsonl());
  }

  TEST_CASE("observer sees every iterate") {
    const Instance inst(zctest::c0());
    RunOptions o = budget(60);
    std::size_t seen = 0;
    o.observer = [&](std::size_t t, const BlockVector& x, const YVector* y) {
      CHECK(t == seen);
      CHECK(y == nullptr);
      CHECK(x.size() == 60);
      ++seen;
    };
    const RunTrace tr = run_penalty_class1(inst, constant_schedule(1.0), std::nullopt, o);
    CHECK(seen == tr.rows.size());
  }
}
