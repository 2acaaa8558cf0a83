#include "repel/forward_sim.hpp"

#include <cmath>
#include <random>

#include "repel/errors.hpp"
#include "repel/special_functions.hpp"

namespace repel {

CtmcProcess::CtmcProcess(const RootedTree& tree, double u) : tree_(&tree), u_(u) {
  if (!(u > 0.0)) throw DomainError("u must be positive");
  if (!tree.is_recurrent()) throw DomainError("tree has killing off the root; apply the h-transform first");
}

Sojourn CtmcProcess::sojourn() const {
  Sojourn s;
  if (current_ == 0) s.horizon = u_ - root_time_;
  for (Vertex y : tree_->neighbours(current_)) s.clocks.push_back(Clock::constant(y, tree_->conductance(current_, y)));
  return s;
}

void CtmcProcess::advance(double dt) {
  if (current_ == 0) root_time_ += dt;
}

FireResult CtmcProcess::fire(const Clock& clock, Rng&) {
  current_ = clock.target;
  return {EventCause::RateClock, current_, true};
}

PathRecord simulate_ctmc_to_tau_u(const RootedTree& tree, double u, Rng& rng) {
  CtmcProcess proc(tree, u);
  EngineRun run = run_terminated(proc, rng);
  if (run.log.terminal != TerminalCause::RootTimeExhausted) throw NumericalError("chain stopped without exhausting root time");
  return run.path;
}

std::pair<LocalTimeField, CrossingNetwork> sample_loop_field_and_network(const RootedTree& tree, double alpha,
                                                                         double root_value, Rng& rng) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  if (!(root_value >= 0.0)) throw DomainError("root value must be nonnegative");
  if (!tree.is_recurrent()) throw DomainError("tree has killing off the root; apply the h-transform first");
  LocalTimeField field(tree.size(), 0.0);
  CrossingNetwork n(tree.size());
  field[0] = root_value;
  for (Vertex x = 1; x < tree.size(); ++x) {
    const double mean = field[tree.parent(x)] * tree.c_down(x);
    std::int64_t k = 0;
    if (mean > 0.0) k = std::poisson_distribution<std::int64_t>(mean)(rng);
    n.down[x] = n.up[x] = k;
    const double shape = static_cast<double>(k) + alpha;
    field[x] = shape > 0.0 ? std::gamma_distribution<double>(shape, 1.0 / tree.c_up(x))(rng) : 0.0;
  }
  return {field, n};
}

CrossingNetwork crossing_network(const RootedTree& tree, const PathRecord& path) {
  CrossingNetwork n(tree.size());
  Vertex cur = path.start;
  for (const auto& j : path.jumps) {
    ++n.at(tree, cur, j.target);
    cur = j.target;
  }
  return n;
}

RayKnightTriple make_triple(const RootedTree& tree, double alpha, double u, Rng& rng) {
  RayKnightTriple t;
  t.alpha = alpha;
  t.u = u;
  std::tie(t.phi0, t.n0) = sample_loop_field_and_network(tree, alpha, 0.0, rng);
  t.path = simulate_ctmc_to_tau_u(tree, u, rng);
  const LocalTimeField L = local_times(t.path, tree.size());
  t.phiU = t.phi0;
  for (Vertex v = 0; v < tree.size(); ++v) t.phiU[v] += L[v];
  t.phiU[0] = u;
  t.nU = t.n0 + crossing_network(tree, t.path);
  return t;
}

std::vector<PathRecord> pd_partition_path(const PathRecord& path, double u, double alpha, Rng& rng, double epsilon) {
  const std::vector<double> sticks = sample_pd_sticks(alpha, 1.0, epsilon, rng);
  // Real times at which the root local time first reaches each cut level.
  std::vector<double> levels;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < sticks.size(); ++k) {
    acc += sticks[k];
    levels.push_back(u * acc);
  }
  std::vector<double> cuts;
  {
    std::size_t next = 0;
    double root_time = 0.0, t = 0.0;
    Vertex cur = path.start;
    auto walk = [&](double until) {
      if (cur == path.start) {
        while (next < levels.size() && root_time + (until - t) >= levels[next]) {
          cuts.push_back(t + (levels[next] - root_time));
          ++next;
        }
        root_time += until - t;
      }
      t = until;
    };
    for (const auto& j : path.jumps) {
      walk(j.time);
      cur = j.target;
    }
    walk(path.lifetime);
    while (cuts.size() < levels.size()) cuts.push_back(path.lifetime);
  }
  cuts.push_back(path.lifetime);
  std::vector<PathRecord> loops;
  std::size_t ji = 0;
  double begin = 0.0;
  for (double end : cuts) {
    PathRecord frag;
    frag.start = path.start;
    while (ji < path.jumps.size() && path.jumps[ji].time <= end) {
      frag.jumps.push_back({path.jumps[ji].time - begin, path.jumps[ji].target});
      ++ji;
    }
    frag.lifetime = end - begin;
    loops.push_back(frag);
    begin = end;
  }
  return loops;
}

double poisson_gamma_conditional_log_pmf(double u, double ell, double c_px, double c_xp, double alpha, std::int64_t n) {
  // Joint weight of (N = n, field = ell) up to n-free factors, normalized by brute-force summation.
  auto log_joint = [&](std::int64_t k) -> double {
    const double shape = static_cast<double>(k) + alpha;
    if (shape <= 0.0) return -INFINITY;
    const double lp = k * std::log(u * c_px) - log_gamma(k + 1.0);
    const double lg = shape * std::log(c_xp) + (shape - 1.0) * std::log(ell) - log_gamma(shape);
    return lp + lg;
  };
  double peak = -INFINITY;
  std::vector<double> w;
  for (std::int64_t k = 0; k < 100000; ++k) {
    w.push_back(log_joint(k));
    peak = std::max(peak, w.back());
    if (k > 10 && w.back() < peak - 60.0) break;
  }
  double s = 0.0;
  for (double v : w) s += std::exp(v - peak);
  return log_joint(n) - peak - std::log(s);
}

}  // namespace repel
