#include "repel/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "repel/errors.hpp"
#include "repel/special_functions.hpp"
#include "repel/stats.hpp"

namespace repel {

double DyadicGrid::scale() const { return std::ldexp(1.0, k); }

DyadicGrid build_dyadic_grid(int k, double span) {
  if (k < 0) throw DomainError("grid level must be nonnegative");
  if (k > 14) throw TooFine("grid level above 14");
  if (!(span > 0.0)) throw DomainError("grid span must be positive");
  const double scale = std::ldexp(1.0, k);
  const double edges_real = span * scale;
  const auto edges = static_cast<std::size_t>(std::llround(edges_real));
  if (edges < 1 || std::abs(edges_real - static_cast<double>(edges)) > 1e-9)
    throw DomainError("span must be a positive multiple of 2^-k");
  DyadicGrid g;
  g.k = k;
  g.span = span;
  g.conductance = 0.5 * scale;
  g.tree = make_path_tree(edges + 1, g.conductance);
  g.position.resize(edges + 1);
  for (std::size_t i = 0; i <= edges; ++i) g.position[i] = static_cast<double>(i) / scale;
  return g;
}

LambdaFunction tent_lambda(double height, double width) {
  return [=](double x) { return std::max(0.0, height * (1.0 - x / width)); };
}

LambdaFunction constant_lambda(double value) {
  return [=](double) { return value; };
}

LambdaFunction table_lambda(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2) throw ParseError("lambda table needs at least two points");
  std::sort(pts.begin(), pts.end());
  return [pts](double x) {
    if (x <= pts.front().first) return pts.front().second;
    if (x >= pts.back().first) return pts.back().second;
    auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(x, -std::numeric_limits<double>::infinity()));
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  };
}

LambdaFunction load_lambda_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read lambda table '" + path + "'");
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x, y;
    if (ss >> x >> y) pts.emplace_back(x, y);
  }
  return table_lambda(std::move(pts));
}

LocalTimeField grid_field(const DyadicGrid& grid, const LambdaFunction& lambda) {
  LocalTimeField f(grid.tree.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = lambda(grid.position[i]);
  return f;
}

InversionRun run_mesh_repelling(const DyadicGrid& grid, const LambdaFunction& lambda, double alpha, Rng& rng,
                                InversionMode mode) {
  const LocalTimeField field = grid_field(grid, lambda);
  InversionRun run = run_inversion(mode, grid.tree, field, alpha, rng);
  const double s = grid.scale();
  for (auto& j : run.path.jumps) j.time /= s;
  for (auto& e : run.log.events) e.time /= s;
  run.path.lifetime /= s;
  return run;
}

double mesh_rate(int k, double lam_x, double lam_y, double alpha, bool to_parent) {
  if (!(lam_y > 0.0)) return 0.0;
  const double z = std::ldexp(std::sqrt(lam_x * lam_y), k);
  const double pre = std::ldexp(1.0, 2 * k - 1) * std::sqrt(lam_y / lam_x);
  return to_parent ? pre * bessel_i_ratio(alpha - 1.0, alpha, z) : pre * bessel_i_ratio(alpha, alpha - 1.0, z);
}

MeshSummary summarize_mesh_run(const DyadicGrid& grid, const InversionRun& run) {
  MeshSummary m;
  m.lifetime = run.path.lifetime;
  const double half = 0.5 * grid.span;
  m.hitting_half = INFINITY;
  Vertex cur = run.path.start;
  double last = 0.0;
  auto visit = [&](Vertex v, double t0, double t1) {
    const double x = grid.position[v];
    m.sup_displacement = std::max(m.sup_displacement, x);
    if (x <= half) m.occupation_half += t1 - t0;
    if (x >= half && t0 < m.hitting_half) m.hitting_half = t0;
  };
  for (const auto& j : run.path.jumps) {
    visit(cur, last, j.time);
    cur = j.target;
    last = j.time;
  }
  visit(cur, last, run.path.lifetime);
  return m;
}

DiagnosticsReport convergence_diagnostics(const std::map<int, std::vector<MeshSummary>>& runs) {
  if (runs.size() < 3) throw InsufficientLevels("convergence diagnostics need at least three levels");
  DiagnosticsReport rep;
  int prev = -1;
  for (const auto& [k, v] : runs) {
    if (prev >= 0 && k != prev + 1) throw InsufficientLevels("levels must be consecutive");
    if (v.empty()) throw TooFewSamples("level without runs");
    prev = k;
    rep.levels.push_back(k);
  }
  struct Def {
    const char* name;
    double MeshSummary::*field;
    bool gating;
  };
  const Def defs[] = {{"lifetime", &MeshSummary::lifetime, true},
                      {"occupation_half", &MeshSummary::occupation_half, true},
                      {"sup_displacement", &MeshSummary::sup_displacement, false},
                      {"hitting_half", &MeshSummary::hitting_half, false}};
  rep.pass = true;
  for (const auto& d : defs) {
    StatisticTrend st;
    st.name = d.name;
    st.gating = d.gating;
    std::vector<std::vector<double>> samples;
    for (const auto& [k, v] : runs) {
      std::vector<double> s;
      for (const auto& m : v)
        if (std::isfinite(m.*(d.field))) s.push_back(m.*(d.field));
      st.mean.push_back(mean(s));
      st.stderr_mean.push_back(s.size() > 1 ? std::sqrt(variance(s) / s.size()) : 0.0);
      samples.push_back(std::move(s));
    }
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) st.w1.push_back(wasserstein_1d(samples[i], samples[i + 1]));
    st.decreasing = true;
    for (std::size_t i = 0; i + 1 < st.w1.size(); ++i)
      if (!(st.w1[i + 1] < st.w1[i])) st.decreasing = false;
    if (st.gating && !st.decreasing) rep.pass = false;
    rep.stats.push_back(std::move(st));
  }
  return rep;
}

std::string DiagnosticsReport::text() const {
  std::ostringstream os;
  os << "levels:";
  for (int k : levels) os << ' ' << k;
  os << '\n';
  for (const auto& s : stats) {
    os << s.name << (s.gating ? "" : " (informative)") << "\n  mean:";
    for (std::size_t i = 0; i < s.mean.size(); ++i) os << ' ' << s.mean[i] << "±" << s.stderr_mean[i];
    os << "\n  W1:";
    for (double w : s.w1) os << ' ' << w;
    os << "\n  decreasing: " << (s.decreasing ? "yes" : "no") << '\n';
  }
  os << "verdict: " << (pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

std::string DiagnosticsReport::csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "statistic,level,mean,stderr,w1_to_next\n";
  for (const auto& s : stats)
    for (std::size_t i = 0; i < levels.size(); ++i) {
      os << s.name << ',' << levels[i] << ',' << s.mean[i] << ',' << s.stderr_mean[i] << ',';
      if (i < s.w1.size()) os << s.w1[i];
      os << '\n';
    }
  return os.str();
}

}  // namespace repel
