#pragma once

#include <utility>
#include <vector>

#include "repel/jump_engine.hpp"
#include "repel/networks.hpp"
#include "repel/rng.hpp"
#include "repel/tree.hpp"

namespace repel {

struct RayKnightTriple {
  LocalTimeField phi0;
  PathRecord path;
  LocalTimeField phiU;
  CrossingNetwork n0;
  CrossingNetwork nU;
  double alpha = 0.0;
  double u = 0.0;
};

// Continuous-time chain with jump rates C_xy, stopped when the root local time reaches u.
class CtmcProcess : public TerminatedRates {
 public:
  CtmcProcess(const RootedTree& tree, double u);
  Vertex current() const override { return current_; }
  Sojourn sojourn() const override;
  void advance(double dt) override;
  FireResult fire(const Clock& clock, Rng& rng) override;
  double root_time() const { return root_time_; }

 private:
  const RootedTree* tree_;
  double u_;
  Vertex current_ = 0;
  double root_time_ = 0.0;
};

PathRecord simulate_ctmc_to_tau_u(const RootedTree& tree, double u, Rng& rng);

// Top-down Poisson–Gamma recursion: field(root) = root_value, N(px) ~ Poisson(field(p) C_px),
// field(x) ~ Gamma(N(px) + α, rate C_xp).
std::pair<LocalTimeField, CrossingNetwork> sample_loop_field_and_network(const RootedTree& tree, double alpha,
                                                                         double root_value, Rng& rng);

RayKnightTriple make_triple(const RootedTree& tree, double alpha, double u, Rng& rng);

std::vector<PathRecord> pd_partition_path(const PathRecord& path, double u, double alpha, Rng& rng,
                                          double epsilon = 1e-9);

CrossingNetwork crossing_network(const RootedTree& tree, const PathRecord& path);

// P(N = n | field(x) = ell) under the recursion for one edge, normalized over n (log scale).
double poisson_gamma_conditional_log_pmf(double u, double ell, double c_px, double c_xp, double alpha, std::int64_t n);

}  // namespace repel
