#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "repel/inversion.hpp"
#include "repel/rng.hpp"
#include "repel/tree.hpp"

namespace repel {

// Path graph on 2^{-k}·ℕ ∩ [0, L] rooted at 0, conductance 2^{k-1} per edge.
struct DyadicGrid {
  int k = 0;
  double span = 0.0;
  double conductance = 0.0;
  RootedTree tree;
  std::vector<double> position;  // macroscopic position of each vertex

  double scale() const;  // 2^k
};

DyadicGrid build_dyadic_grid(int k, double span);

using LambdaFunction = std::function<double(double)>;
LambdaFunction tent_lambda(double height = 1.0, double width = 1.0);
LambdaFunction constant_lambda(double value);
// Piecewise-linear interpolation of (x, value) pairs.
LambdaFunction table_lambda(std::vector<std::pair<double, double>> points);
LambdaFunction load_lambda_table(const std::string& path);

LocalTimeField grid_field(const DyadicGrid& grid, const LambdaFunction& lambda);

// Inversion on the grid tree with time measured macroscopically (micro time / 2^k).
InversionRun run_mesh_repelling(const DyadicGrid& grid, const LambdaFunction& lambda, double alpha, Rng& rng,
                                InversionMode mode = InversionMode::Mixture);

// Vertex repelling rate at level k in macroscopic time.
double mesh_rate(int k, double lam_x, double lam_y, double alpha, bool to_parent);

struct MeshSummary {
  double lifetime = 0.0;
  double sup_displacement = 0.0;
  double occupation_half = 0.0;  // time spent in [0, L/2]
  double hitting_half = 0.0;     // first time at or beyond L/2
};

MeshSummary summarize_mesh_run(const DyadicGrid& grid, const InversionRun& run);

struct StatisticTrend {
  std::string name;
  std::vector<double> w1;  // W1(level i, level i+1)
  std::vector<double> mean, stderr_mean;
  bool decreasing = false;
  bool gating = false;
};

struct DiagnosticsReport {
  std::vector<int> levels;
  std::vector<StatisticTrend> stats;
  bool pass = false;
  std::string text() const;
  std::string csv() const;
};

DiagnosticsReport convergence_diagnostics(const std::map<int, std::vector<MeshSummary>>& runs_by_level);

}  // namespace repel
