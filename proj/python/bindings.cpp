// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "zerochain/algorithms.hpp"
#include "zerochain/instance.hpp"
#include "zerochain/linops.hpp"
#include "zerochain/params.hpp"
#include "zerochain/stationarity.hpp"
#include "zerochain/suites.hpp"

namespace py = pybind11;
using namespace zerochain;

namespace {

BlockVector to_block(const Instance& inst, const std::vector<double>& v) {
  return BlockVector(inst.m(), inst.dbar(), Vec(v.begin(), v.end()));
}

py::list rows_to_list(const RunTrace& trace) {
  py::list out;
  for (const auto& r : trace.rows) {
    py::dict row;
    row["t"] = r.t;
    row["oracle_count"] = r.oracle_count;
    row["J"] = r.front;
    row["residual_AP"] = r.residual_ap;
    row["certificate_lb"] = r.certificate_lb;
    row["F0"] = r.objective;
    if (!std::isnan(r.residual_sp)) {
      row["residual_SP"] = r.residual_sp;
      row["residual_SP_lower"] = r.residual_sp_lower;
    }
    out.append(row);
  }
  return out;
}

py::dict trace_to_dict(const Instance& inst, const RunTrace& trace, bool verify) {
  py::dict d;
  d["algorithm"] = trace.algorithm;
  d["class"] = trace.class_id;
  py::dict hp;
  for (const auto& [k, v] : trace.hyperparameters) hp[py::str(k)] = v;
  d["hyperparameters"] = hp;
  d["rows"] = rows_to_list(trace);
  d["x_final"] = trace.x_final.values();
  if (verify) {
    const SpanReport rep = trace.verify(inst);
    d["verified"] = rep.pass;
  }
  return d;
}

RunOptions options(std::size_t max_oracles, std::size_t sp_until) {
  RunOptions o;
  o.max_oracles = max_oracles;
  o.sp_residual_until = sp_until;
  return o;
}

py::dict report_to_dict(const StationarityReport& r) {
  py::dict d;
  d["problem"] = std::string(problem_name(r.problem));
  py::dict comps;
  for (const auto& c : r.components) comps[py::str(c.name)] = c.value;
  d["components"] = comps;
  d["residual"] = r.residual;
  d["residual_lower"] = r.residual_lower;
  d["certificate_lb"] = r.certificate_lb;
  d["approximate"] = r.approximate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Matrix-free hard instance for decentralized nonconvex optimization";

  py::class_<InstanceParams>(mod, "InstanceParams")
      .def(py::init([](double eps, double lf, int m1, int m2, int dbar,
                       std::optional<double> beta) {
             InstanceParams p;
             p.eps = eps;
             p.lf = lf;
             p.m1 = m1;
             p.m2 = m2;
             p.dbar = dbar;
             p.beta = beta;
             return p;
           }),
           py::arg("eps") = 0.1, py::arg("lf") = 1.0, py::arg("m1") = 2, py::arg("m2") = 2,
           py::arg("dbar") = 5, py::arg("beta") = py::none())
      .def_readwrite("eps", &InstanceParams::eps)
      .def_readwrite("lf", &InstanceParams::lf)
      .def_readwrite("m1", &InstanceParams::m1)
      .def_readwrite("m2", &InstanceParams::m2)
      .def_readwrite("dbar", &InstanceParams::dbar)
      .def_readwrite("beta", &InstanceParams::beta)
      .def("validate", &InstanceParams::validate)
      .def("to_json", &InstanceParams::to_json)
      .def_static("from_json", &InstanceParams::from_json);

  py::class_<Instance>(mod, "Instance")
      .def(py::init<const InstanceParams&>(), py::arg("params") = InstanceParams{})
      .def_property_readonly("m", &Instance::m)
      .def_property_readonly("dbar", &Instance::dbar)
      .def_property_readonly("d", [](const Instance& i) { return i.layout().d; })
      .def_property_readonly("n", [](const Instance& i) { return i.layout().n; })
      .def_property_readonly("nbar", [](const Instance& i) { return i.layout().nbar; })
      .def_property_readonly("eps", &Instance::eps)
      .def_property_readonly("beta", &Instance::beta)
      .def_property_readonly("beta_threshold", &Instance::beta_threshold)
      .def_property_readonly("norm_A", &Instance::norm_A)
      .def("f0", [](const Instance& i, const std::vector<double>& x) { return i.f0(to_block(i, x)); })
      .def("grad_f0",
           [](const Instance& i, const std::vector<double>& x) {
             return i.grad_f0(to_block(i, x)).values();
           })
      .def("delta_f0_upper", &Instance::delta_f0_upper)
      .def("residual_AP",
           [](const Instance& i, const std::vector<double>& x) {
             return report_to_dict(residual_AP(i, to_block(i, x)));
           })
      .def("residual_P",
           [](const Instance& i, const std::vector<double>& x) {
             return report_to_dict(residual_P(i, to_block(i, x)));
           })
      .def("certificate_lb", [](const Instance& i, const std::vector<double>& x) {
        return certificate_lb(i, to_block(i, x));
      });

  mod.def("kappa_joint", [](const InstanceParams& p) { return linops::kappa_joint(Layout::from(p)); });
  mod.def("kappa_A", [](const InstanceParams& p) { return linops::kappa_A(Layout::from(p)); });

  mod.def(
      "run_penalty",
      [](const Instance& inst, double rho, std::size_t max_oracles, bool verify) {
        const RunTrace t =
            run_penalty_class1(inst, constant_schedule(rho), std::nullopt, options(max_oracles, 0));
        return trace_to_dict(inst, t, verify);
      },
      py::arg("instance"), py::arg("rho") = 1.0, py::arg("max_oracles") = 500,
      py::arg("verify") = true);
  mod.def(
      "run_alm",
      [](const Instance& inst, double penalty, double dual_step, std::size_t max_oracles,
         bool verify) {
        const RunTrace t =
            run_alm_class1(inst, penalty, dual_step, std::nullopt, options(max_oracles, 0));
        return trace_to_dict(inst, t, verify);
      },
      py::arg("instance"), py::arg("penalty") = 1.0, py::arg("dual_step") = 1.0,
      py::arg("max_oracles") = 500, py::arg("verify") = true);
  mod.def(
      "run_ladmm",
      [](const Instance& inst, double penalty, std::size_t max_oracles, std::size_t sp_until,
         bool verify) {
        const RunTrace t =
            run_ladmm_class2(inst, penalty, std::nullopt, options(max_oracles, sp_until));
        return trace_to_dict(inst, t, verify);
      },
      py::arg("instance"), py::arg("penalty") = 1.0, py::arg("max_oracles") = 500,
      py::arg("sp_residual_until") = 0, py::arg("verify") = true);
  mod.def(
      "run_random_generic",
      [](const Instance& inst, int class_id, std::uint64_t seed, std::size_t max_oracles) {
        const RunTrace t = run_generic(inst, class_id, random_rule(seed), options(max_oracles, 0));
        return trace_to_dict(inst, t, true);
      },
      py::arg("instance"), py::arg("class_id"), py::arg("seed"), py::arg("max_oracles") = 500);

  mod.def("bounds_json", [](const Instance& inst) { return suites::bounds_json(inst); });
  mod.def(
      "run_criterion",
      [](int id, const InstanceParams& p, std::uint64_t seed) {
        const auto r = suites::run_criterion(id, p, seed);
        py::dict d;
        d["id"] = r.id;
        d["title"] = r.title;
        d["pass"] = r.pass;
        d["seconds"] = r.seconds;
        py::list checks;
        for (const auto& c : r.checks) {
          py::dict cd;
          cd["name"] = c.name;
          cd["pass"] = c.pass;
          cd["slack"] = c.slack;
          cd["detail"] = c.detail;
          checks.append(cd);
        }
        d["checks"] = checks;
        return d;
      },
      py::arg("id"), py::arg("params") = InstanceParams{}, py::arg("seed") = 20260101);
}
