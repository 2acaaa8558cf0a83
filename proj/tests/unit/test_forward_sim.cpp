#include <gtest/gtest.h>

#include <cmath>

#include "repel/forward_sim.hpp"
#include "repel/rng.hpp"
#include "repel/stats.hpp"

using namespace repel;

namespace {

double poisson_pmf(double mean, std::int64_t k) { return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0)); }

}  // namespace

TEST(ForwardSim, CtmcRootDeparturesAndLifetime) {
  const RootedTree t = make_path_tree(2);
  const double u = 1.5;
  const int n = 20000;
  std::vector<std::int64_t> departures;
  std::vector<double> life;
  for (int i = 0; i < n; ++i) {
    Rng rng = make_rng(300, i);
    const PathRecord p = simulate_ctmc_to_tau_u(t, u, rng);
    ASSERT_NO_THROW(validate_path(t, p));
    EXPECT_EQ(p.end(), 0u);
    EXPECT_NEAR(local_times(p, 2)[0], u, 1e-12);
    departures.push_back(crossing_network(t, p).down[1]);
    life.push_back(p.lifetime);
  }
  EXPECT_EQ(chi_square_pmf(departures, [&](std::int64_t k) { return poisson_pmf(u, k); }).verdict, Verdict::Pass);
  // lifetime = u + Gamma(N, 1) with N ~ Poisson(u): mean 2u, variance 2u
  EXPECT_EQ(z_report("life", mean(life), 2.0 * u, std::sqrt(2.0 * u / n)).verdict, Verdict::Pass);
}

TEST(ForwardSim, LoopFieldAtAlphaZeroVanishes) {
  const RootedTree t = make_star_tree(3);
  Rng rng = make_rng(301, 0);
  for (int i = 0; i < 100; ++i) {
    const auto [field, net] = sample_loop_field_and_network(t, 0.0, 0.0, rng);
    for (double x : field) EXPECT_EQ(x, 0.0);
    EXPECT_EQ(net.total(), 0);
  }
}

TEST(ForwardSim, LoopFieldIsGammaHalf) {
  const RootedTree t = make_path_tree(2);
  std::vector<double> s;
  Rng rng = make_rng(302, 0);
  for (int i = 0; i < 20000; ++i) s.push_back(sample_loop_field_and_network(t, 0.5, 0.0, rng).first[1]);
  // Gamma(1/2, 1) has cdf erf(sqrt(x))
  EXPECT_EQ(ks_one_sample(s, [](double x) { return std::erf(std::sqrt(x)); }).verdict, Verdict::Pass);
}

TEST(ForwardSim, TripleInvariants) {
  const RootedTree t = make_star_tree(3);
  for (int i = 0; i < 200; ++i) {
    Rng rng = make_rng(303, i);
    const RayKnightTriple tr = make_triple(t, 0.5, 1.0, rng);
    const LocalTimeField L = local_times(tr.path, t.size());
    for (Vertex v = 1; v < t.size(); ++v) EXPECT_NEAR(tr.phiU[v], tr.phi0[v] + L[v], 1e-12);
    EXPECT_EQ(tr.phiU[0], 1.0);
    EXPECT_EQ(tr.phi0[0], 0.0);
    EXPECT_TRUE(is_sourceless(t, tr.n0));
    EXPECT_TRUE(is_sourceless(t, tr.nU));
    EXPECT_EQ(tr.nU, tr.n0 + crossing_network(t, tr.path));
  }
}

TEST(ForwardSim, CrossingNetworkOfPath) {
  const RootedTree t = make_path_tree(3);
  PathRecord p;
  p.jumps = {{0.5, 1}, {1.0, 2}, {1.5, 1}, {2.0, 0}, {2.5, 1}};
  p.lifetime = 3.0;
  const CrossingNetwork n = crossing_network(t, p);
  EXPECT_EQ(n.down[1], 2);
  EXPECT_EQ(n.up[1], 1);
  EXPECT_EQ(n.down[2], 1);
  EXPECT_EQ(n.up[2], 1);
  EXPECT_FALSE(is_sourceless(t, n));
}

TEST(ForwardSim, PoissonDirichletPartition) {
  const RootedTree t = make_path_tree(3);
  for (int i = 0; i < 50; ++i) {
    Rng rng = make_rng(304, i);
    const PathRecord p = simulate_ctmc_to_tau_u(t, 2.0, rng);
    const auto loops = pd_partition_path(p, 2.0, 0.7, rng);
    ASSERT_FALSE(loops.empty());
    double life = 0.0;
    std::size_t jumps = 0;
    for (const auto& l : loops) {
      EXPECT_EQ(l.start, 0u);
      EXPECT_GE(l.lifetime, 0.0);
      life += l.lifetime;
      jumps += l.jumps.size();
    }
    EXPECT_NEAR(life, p.lifetime, 1e-12);
    EXPECT_EQ(jumps, p.jumps.size());
  }
}

TEST(ForwardSim, ConditionalPmfNormalizes) {
  for (double alpha : {0.0, 0.5, 2.0}) {
    double s = 0.0;
    for (std::int64_t n = 0; n < 400; ++n) s += std::exp(poisson_gamma_conditional_log_pmf(1.0, 0.8, 1.0, 1.5, alpha, n));
    EXPECT_NEAR(s, 1.0, 1e-10) << alpha;
  }
}
