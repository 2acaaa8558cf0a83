#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "repel/errors.hpp"
#include "repel/mesh.hpp"
#include "repel/rng.hpp"

using namespace repel;

TEST(Mesh, GridConstruction) {
  const DyadicGrid g = build_dyadic_grid(3, 1.0);
  ASSERT_EQ(g.tree.size(), 9u);
  EXPECT_DOUBLE_EQ(g.conductance, 4.0);
  EXPECT_DOUBLE_EQ(g.scale(), 8.0);
  for (Vertex v = 0; v < 9; ++v) EXPECT_DOUBLE_EQ(g.position[v], v / 8.0);
  for (Vertex v = 1; v < 9; ++v) {
    EXPECT_EQ(g.tree.parent(v), v - 1);
    EXPECT_DOUBLE_EQ(g.tree.c_down(v), 4.0);
  }
  EXPECT_EQ(build_dyadic_grid(2, 1.5).tree.size(), 7u);
}

TEST(Mesh, GridErrors) {
  EXPECT_THROW(build_dyadic_grid(15, 1.0), TooFine);
  EXPECT_THROW(build_dyadic_grid(-1, 1.0), DomainError);
  EXPECT_THROW(build_dyadic_grid(3, 0.0), DomainError);
  EXPECT_THROW(build_dyadic_grid(2, 0.3), DomainError);
}

TEST(Mesh, LambdaSources) {
  const auto tent = tent_lambda();
  EXPECT_DOUBLE_EQ(tent(0.0), 1.0);
  EXPECT_DOUBLE_EQ(tent(0.25), 0.75);
  EXPECT_DOUBLE_EQ(tent(1.5), 0.0);
  EXPECT_DOUBLE_EQ(constant_lambda(0.4)(7.0), 0.4);
  const auto tab = table_lambda({{1.0, 0.0}, {0.0, 2.0}});
  EXPECT_DOUBLE_EQ(tab(0.5), 1.0);
  EXPECT_DOUBLE_EQ(tab(-1.0), 2.0);
  EXPECT_DOUBLE_EQ(tab(3.0), 0.0);
  EXPECT_THROW(table_lambda({{0.0, 1.0}}), ParseError);

  const std::string path = ::testing::TempDir() + "lambda_table.csv";
  {
    std::ofstream out(path);
    out << "# x,value\n0,1\n0.5,0.5\n1,0\n";
  }
  EXPECT_DOUBLE_EQ(load_lambda_table(path)(0.25), 0.75);
  std::remove(path.c_str());
  EXPECT_THROW(load_lambda_table(path), ParseError);

  const DyadicGrid g = build_dyadic_grid(2, 1.0);
  const LocalTimeField f = grid_field(g, tent);
  EXPECT_EQ(f, (LocalTimeField{1.0, 0.75, 0.5, 0.25, 0.0}));
}

TEST(Mesh, RateScaling) {
  for (int k : {2, 5})
    for (bool up : {true, false}) {
      const double c = std::ldexp(1.0, k - 1);
      EXPECT_NEAR(mesh_rate(k, 0.6, 0.4, 0.5, up), std::ldexp(vertex_repelling_rate(c, 0.6, 0.4, 0.5, up), k),
                  1e-10 * mesh_rate(k, 0.6, 0.4, 0.5, up));
    }
  EXPECT_EQ(mesh_rate(3, 0.6, 0.0, 0.5, true), 0.0);
}

TEST(Mesh, RunsAndSummaries) {
  const DyadicGrid g = build_dyadic_grid(3, 1.0);
  Rng rng = make_rng(700, 0);
  const InversionRun r = run_mesh_repelling(g, tent_lambda(), 0.0, rng);
  // at alpha = 0 all local time is used: lifetime is the Riemann sum of the field
  double total = 0.0;
  for (double x : grid_field(g, tent_lambda())) total += x;
  EXPECT_NEAR(r.path.lifetime, total / 8.0, 1e-9);

  InversionRun hand;
  hand.path.jumps = {{0.5, 1}, {1.0, 2}, {1.5, 3}, {1.6, 4}, {1.8, 3}};
  hand.path.lifetime = 2.0;
  const MeshSummary m = summarize_mesh_run(g, hand);
  EXPECT_DOUBLE_EQ(m.lifetime, 2.0);
  EXPECT_DOUBLE_EQ(m.sup_displacement, 0.5);
  EXPECT_DOUBLE_EQ(m.hitting_half, 1.6);
  EXPECT_DOUBLE_EQ(m.occupation_half, 2.0);
}

TEST(Mesh, Diagnostics) {
  std::map<int, std::vector<MeshSummary>> runs;
  for (int k = 3; k <= 5; ++k)
    for (int i = 0; i < 50; ++i) {
      MeshSummary m;
      m.lifetime = 0.5 + 0.01 * i + std::ldexp(1.0, -k);
      m.sup_displacement = 0.5;
      m.occupation_half = 0.4;
      m.hitting_half = 0.2;
      runs[k].push_back(m);
    }
  const DiagnosticsReport rep = convergence_diagnostics(runs);
  EXPECT_EQ(rep.levels, (std::vector<int>{3, 4, 5}));
  ASSERT_FALSE(rep.stats.empty());
  for (const auto& s : rep.stats) EXPECT_EQ(s.w1.size(), 2u);
  EXPECT_NE(rep.text().find("lifetime"), std::string::npos);
  EXPECT_NE(rep.csv().find("lifetime"), std::string::npos);

  auto two = runs;
  two.erase(5);
  EXPECT_THROW(convergence_diagnostics(two), InsufficientLevels);
  auto gap = runs;
  gap[7] = gap[5];
  gap.erase(5);
  EXPECT_THROW(convergence_diagnostics(gap), InsufficientLevels);
}
