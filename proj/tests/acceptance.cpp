// Copyright 2026 The zerochain Authors
// SPDX-License-Identifier: Apache-2.0
//
// Prints one PASS/FAIL line per acceptance criterion at the default
// configuration and exits nonzero if any fails. The harness binary path is
// the first argument.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "zerochain/suites.hpp"

namespace {

int run_command(const std::string& cmd, std::string* out) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    if (out) out->append(buf.data(), n);
  }
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-harness>\n");
    return 2;
  }
  const std::string harness = std::string("\"") + argv[1] + "\"";
  const zerochain::InstanceParams c0;
  bool all = true;
  bool first_ten = true;
  for (int id = 1; id <= zerochain::suites::kNumCriteria; ++id) {
    const auto r = zerochain::suites::run_criterion(id, c0);
    first_ten = first_ten && r.pass;
    std::printf("criterion %d: %s  %s (%.2f s)\n", id, r.pass ? "PASS" : "FAIL", r.title.c_str(),
                r.seconds);
    for (const auto& c : r.checks) {
      std::printf("    [%s] %s: %s\n", c.pass ? "ok" : "FAILED", c.name.c_str(), c.detail.c_str());
    }
    std::fflush(stdout);
  }
  all = first_ten;

  std::string b1, b2;
  const int c1 = run_command(harness + " bounds", &b1);
  const int c2 = run_command(harness + " bounds", &b2);
  const int cv = run_command(harness + " verify > /dev/null 2>&1", nullptr);
  const bool bounds_ok = c1 == 0 && c2 == 0 && !b1.empty() && b1 == b2;
  const bool verify_ok = (cv == 0) == first_ten;
  const bool c11 = bounds_ok && verify_ok;
  all = all && c11;
  std::printf("criterion 11: %s  command-line contract\n", c11 ? "PASS" : "FAIL");
  std::printf("    [%s] bounds output identical across two invocations (%zu bytes)\n",
              bounds_ok ? "ok" : "FAILED", b1.size());
  std::printf("    [%s] verify exit code %d matches criteria 1-10 %s\n", verify_ok ? "ok" : "FAILED",
              cv, first_ten ? "passing" : "failing");
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
