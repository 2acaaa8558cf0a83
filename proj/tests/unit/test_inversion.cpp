#include <gtest/gtest.h>

#include <cmath>

#include "repel/errors.hpp"
#include "repel/forward_sim.hpp"
#include "repel/inversion.hpp"
#include "repel/rng.hpp"
#include "repel/stats.hpp"

using namespace repel;

TEST(Inversion, Modes) {
  for (auto m : {InversionMode::JumpChainOnly, InversionMode::VertexEdge, InversionMode::Mixture,
                 InversionMode::Direct})
    EXPECT_EQ(parse_mode(mode_name(m)), m);
  EXPECT_THROW(parse_mode("bogus"), ValidationError);
}

TEST(Inversion, JumpChainProbabilities) {
  const RootedTree t = make_path_tree(3);
  CrossingNetwork th(3);
  th.down[1] = th.up[1] = 2;
  th.down[2] = th.up[2] = 1;
  const auto p = jump_chain_probabilities(t, th, 1, 0.5);
  double up = 0.0, down = 0.0;
  for (auto [y, w] : p) (y == 0 ? up : down) += w;
  EXPECT_NEAR(up, 0.6, 1e-15);
  EXPECT_NEAR(down, 0.4, 1e-15);

  CrossingNetwork empty(3);
  const auto q = jump_chain_probabilities(t, empty, 2, 1.0);
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0].first, 1u);
  EXPECT_DOUBLE_EQ(q[0].second, 1.0);
  Rng rng = make_rng(500, 0);
  EXPECT_THROW(jump_chain_step(t, empty, 0, 0.5, rng), StuckState);
}

TEST(Inversion, RateAtHalf) {
  // order ±1/2 ratios are coth and tanh
  const double z = 2.0 * 1.5 * std::sqrt(0.6 * 0.9);
  const double pre = 1.5 * std::sqrt(0.9 / 0.6);
  EXPECT_NEAR(vertex_repelling_rate(1.5, 0.6, 0.9, 0.5, true), pre / std::tanh(z), 1e-13);
  EXPECT_NEAR(vertex_repelling_rate(1.5, 0.6, 0.9, 0.5, false), pre * std::tanh(z), 1e-13);
  EXPECT_EQ(vertex_repelling_rate(1.5, 0.6, 0.0, 0.5, true), 0.0);
}

TEST(Inversion, DirectAtAlphaZeroUsesAllTime) {
  const RootedTree t = make_path_tree(3);
  const LocalTimeField lam = {1.0, 0.7, 0.5};
  for (int i = 0; i < 200; ++i) {
    Rng rng = make_rng(501, i);
    const InversionRun r = run_vertex_repelling_direct(t, lam, 0.0, rng);
    ASSERT_NO_THROW(validate_path(t, r.path));
    EXPECT_NEAR(r.path.lifetime, 2.2, 1e-9);
    const auto L = local_times(r.path, 3);
    for (Vertex v = 0; v < 3; ++v) {
      EXPECT_NEAR(L[v], lam[v], 1e-9);
      EXPECT_NEAR(r.terminal_lambda[v], 0.0, 1e-9);
    }
    EXPECT_EQ(r.path.end(), 0u);
    EXPECT_EQ(r.log.terminal, TerminalCause::RootTimeExhausted);
  }
}

TEST(Inversion, PositiveAlphaStaysWithinBudget) {
  const RootedTree t = make_star_tree(2);
  const LocalTimeField lam = {1.0, 0.6, 0.3};
  for (auto mode : {InversionMode::Direct, InversionMode::Mixture}) {
    for (int i = 0; i < 200; ++i) {
      Rng rng = make_rng(502, i);
      const InversionRun r = run_inversion(mode, t, lam, 0.5, rng);
      const auto L = local_times(r.path, 3);
      for (Vertex v = 0; v < 3; ++v) {
        EXPECT_LE(L[v], lam[v] + 1e-9);
        EXPECT_NEAR(r.terminal_lambda[v], lam[v] - L[v], 1e-9);
      }
      EXPECT_NEAR(L[0], 1.0, 1e-9);
      EXPECT_EQ(r.path.end(), 0u);
    }
  }
}

TEST(Inversion, CompatibilityErrors) {
  const RootedTree t = make_path_tree(3);
  Rng rng = make_rng(503, 0);
  EXPECT_THROW(run_vertex_repelling_direct(t, {0.0, 0.5, 0.5}, 0.5, rng), DomainError);
  EXPECT_THROW(run_vertex_repelling_direct(t, {1.0, 0.0, 0.5}, 0.0, rng), DomainError);
  CrossingNetwork n(3);
  n.down[1] = 1;
  EXPECT_THROW(run_vertex_edge_repelling(t, {1.0, 0.5, 0.5}, n, 0.5, rng), IncompatibleInputs);
  EXPECT_THROW(run_vertex_edge_repelling(t, {1.0, 0.5, 0.5}, CrossingNetwork(2), 0.5, rng), IncompatibleInputs);
  CrossingNetwork off(3);
  off.down[2] = off.up[2] = 1;
  off.down[1] = off.up[1] = 1;
  EXPECT_THROW(run_vertex_edge_repelling(t, {1.0, 0.5, 0.0}, off, 0.0, rng), IncompatibleInputs);
  CrossingNetwork skip(3);
  skip.down[2] = skip.up[2] = 1;
  EXPECT_THROW(run_vertex_edge_repelling(t, {1.0, 0.5, 0.5}, skip, 0.0, rng), IncompatibleInputs);
  EXPECT_THROW(run_inversion(InversionMode::VertexEdge, t, {1.0, 0.5, 0.5}, 0.5, rng), ValidationError);
}

TEST(Inversion, FirstJumpTimeDirectVersusMixture) {
  const RootedTree t = make_path_tree(3);
  const LocalTimeField lam = {1.0, 0.7, 0.5};
  std::vector<double> a, b;
  for (int i = 0; i < 20000; ++i) {
    Rng r1 = make_rng(504, i, 1), r2 = make_rng(504, i, 2);
    const auto x = run_vertex_repelling_direct(t, lam, 0.5, r1);
    const auto y = run_vertex_repelling_mixture(t, lam, 0.5, r2);
    a.push_back(x.path.jumps.empty() ? x.path.lifetime : x.path.jumps[0].time);
    b.push_back(y.path.jumps.empty() ? y.path.lifetime : y.path.jumps[0].time);
  }
  EXPECT_EQ(ks_two_sample(a, b).verdict, Verdict::Pass);
}

TEST(Inversion, JumpChainOnlyCountsMatchNetwork) {
  const RootedTree t = make_path_tree(3);
  const LocalTimeField lam = {1.0, 0.7, 0.5};
  for (int i = 0; i < 100; ++i) {
    Rng rng = make_rng(505, i);
    const InversionRun r = run_jump_chain_only(t, lam, 1.0, rng);
    ASSERT_TRUE(r.initial_network.has_value());
    ASSERT_TRUE(r.terminal_theta.has_value());
    // loops away from the root stay unvisited
    EXPECT_EQ(crossing_network(t, r.path) + *r.terminal_theta, *r.initial_network);
    EXPECT_EQ(r.terminal_theta->out_degree(t, 0), 0);
    for (std::size_t k = 0; k < r.path.jumps.size(); ++k) EXPECT_DOUBLE_EQ(r.path.jumps[k].time, k + 1.0);
  }
}
