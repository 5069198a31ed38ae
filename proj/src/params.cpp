// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
#include "zerochain/params.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace zerochain {

void InstanceParams::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(eps > 0.0 && eps < 1.0)) fail("eps must lie in (0, 1), got " + std::to_string(eps));
  if (!(lf > 0.0)) fail("lf must be positive, got " + std::to_string(lf));
  if (m1 < 2) fail("m1 must be >= 2, got " + std::to_string(m1));
  if (m2 < 1) fail("m2 must be >= 1, got " + std::to_string(m2));
  if ((m1 * m2) % 2 != 0) fail("m1 * m2 must be even");
  if (dbar < 5 || dbar % 2 == 0) fail("dbar must be odd and >= 5, got " + std::to_string(dbar));
  if (beta && !(*beta > 0.0)) fail("beta must be positive");
}

std::string InstanceParams::to_json() const {
  nlohmann::ordered_json j;
  j["eps"] = eps;
  j["lf"] = lf;
  j["m1"] = m1;
  j["m2"] = m2;
  j["dbar"] = dbar;
  j["beta"] = beta ? nlohmann::ordered_json(*beta) : nlohmann::ordered_json(nullptr);
  return j.dump();
}

InstanceParams InstanceParams::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  InstanceParams p;
  try {
    if (j.contains("eps")) p.eps = j.at("eps").get<double>();
    if (j.contains("lf")) p.lf = j.at("lf").get<double>();
    if (j.contains("m1")) p.m1 = j.at("m1").get<int>();
    if (j.contains("m2")) p.m2 = j.at("m2").get<int>();
    if (j.contains("dbar")) p.dbar = j.at("dbar").get<int>();
    if (j.contains("beta") && !j.at("beta").is_null()) p.beta = j.at("beta").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config field error: ") + e.what());
  }
  return p;
}

InstanceParams InstanceParams::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

Layout Layout::from(const InstanceParams& p) {
  p.validate();
  Layout l;
  l.m1 = p.m1;
  l.m2 = p.m2;
  l.m = static_cast<std::size_t>(3 * p.m1 * p.m2);
  l.dbar = static_cast<std::size_t>(p.dbar);
  l.d = l.m * l.dbar;
  l.n = (l.m - 3 * static_cast<std::size_t>(p.m2)) * l.dbar;
  l.nbar = (3 * static_cast<std::size_t>(p.m2) - 1) * l.dbar;
  l.lf = p.lf;
  l.in_m.assign(l.m, false);
  for (int i = 1; i <= 3 * p.m2 - 1; ++i) l.in_m[static_cast<std::size_t>(i * p.m1)] = true;
  for (std::size_t k = 1; k <= l.m - 1; ++k) {
    (l.in_m[k] ? l.rows_m : l.rows_mc).push_back(k);
  }
  if (l.m % 3 != 0 || l.rows_m.size() * l.dbar != l.nbar || l.rows_mc.size() * l.dbar != l.n) {
    throw std::logic_error("Layout: inconsistent index sets");
  }
  return l;
}

}  // namespace zerochain
