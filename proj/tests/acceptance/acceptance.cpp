// One PASS/FAIL line per acceptance criterion; detail table on stderr.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "repel/errors.hpp"
#include "repel/verify.hpp"

int main(int argc, char** argv) {
  repel::VerifyOptions opt;
  opt.seed = 20240601;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) opt.seed = std::strtoull(argv[++i], nullptr, 10);
    else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--reps") && i + 1 < argc) opt.reps = std::strtoull(argv[++i], nullptr, 10);
  }
  using Fn = repel::CheckResult (*)(const repel::VerifyOptions&);
  const Fn checks[] = {repel::check_special_functions, repel::check_poisson_gamma_identity,
                       repel::check_ray_knight,        repel::check_jump_chain_law,
                       repel::check_holding_times,     repel::check_inversion_equivalence,
                       repel::check_round_trip,        repel::check_percolation_identity,
                       repel::check_percolation_inversion, repel::check_engine,
                       repel::check_mesh};
  int failed = 0;
  for (int k = 1; k <= 11; ++k) {
    if (only && k != only) continue;
    repel::CheckResult r;
    try {
      r = checks[k - 1](opt);
    } catch (const repel::Error& e) {
      std::printf("criterion %2d FAIL  error: %s\n", k, e.what());
      ++failed;
      continue;
    }
    std::cerr << repel::reports_table(r.reports);
    std::printf("criterion %2d %s  %s (%zu reports, %.1fs)\n", r.number, r.pass() ? "PASS" : "FAIL", r.title.c_str(),
                r.reports.size(), r.seconds);
    std::fflush(stdout);
    if (!r.pass()) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
