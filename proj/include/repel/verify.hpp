#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repel/stats.hpp"

namespace repel {

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::size_t reps = 0;     // 0 keeps each check's default sample size
  std::vector<int> levels;  // mesh levels; empty = 3..7
  unsigned threads = 0;
};

struct CheckResult {
  int number = 0;
  std::string title;
  std::vector<TestReport> reports;
  double seconds = 0.0;
  bool pass() const;
};

CheckResult check_special_functions(const VerifyOptions& opt);
CheckResult check_poisson_gamma_identity(const VerifyOptions& opt);
CheckResult check_ray_knight(const VerifyOptions& opt);
CheckResult check_jump_chain_law(const VerifyOptions& opt);
CheckResult check_holding_times(const VerifyOptions& opt);
CheckResult check_inversion_equivalence(const VerifyOptions& opt);
CheckResult check_round_trip(const VerifyOptions& opt);
CheckResult check_percolation_identity(const VerifyOptions& opt);
CheckResult check_percolation_inversion(const VerifyOptions& opt);
CheckResult check_engine(const VerifyOptions& opt);
CheckResult check_mesh(const VerifyOptions& opt);

// specfun, crossings, ray-knight, inversion, percolation, mesh, engine, all
const std::vector<std::string>& suite_names();
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& opt);

}  // namespace repel
