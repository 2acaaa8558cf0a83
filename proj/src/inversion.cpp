#include "repel/inversion.hpp"

#include <cmath>
#include <limits>

#include "repel/errors.hpp"
#include "repel/special_functions.hpp"

namespace repel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxJumps = 10'000'000;
}  // namespace

const char* mode_name(InversionMode m) {
  switch (m) {
    case InversionMode::JumpChainOnly: return "chain";
    case InversionMode::VertexEdge: return "vertex-edge";
    case InversionMode::Mixture: return "mixture";
    case InversionMode::Direct: return "direct";
  }
  return "?";
}

InversionMode parse_mode(const std::string& s) {
  if (s == "chain") return InversionMode::JumpChainOnly;
  if (s == "vertex-edge") return InversionMode::VertexEdge;
  if (s == "mixture") return InversionMode::Mixture;
  if (s == "direct") return InversionMode::Direct;
  throw ValidationError("unknown inversion mode '" + s + "'");
}

std::vector<std::pair<Vertex, double>> jump_chain_probabilities(const RootedTree& tree, const CrossingNetwork& theta,
                                                                Vertex x, double alpha) {
  std::vector<std::pair<Vertex, double>> out;
  const double total = modified_degree(tree, theta, x, alpha);
  if (total > 0.0) {
    for (Vertex y : tree.neighbours(x)) {
      const double w = modified_count(tree, theta, x, y, alpha);
      if (w < 0.0) throw StuckState("negative modified count at " + tree.id(x));
      if (w > 0.0) out.emplace_back(y, w / total);
    }
    return out;
  }
  if (x == tree.root()) throw StuckState("no remaining crossings out of the root");
  out.emplace_back(tree.parent(x), 1.0);
  return out;
}

Vertex jump_chain_step(const RootedTree& tree, const CrossingNetwork& theta, Vertex x, double alpha, Rng& rng) {
  const double total = modified_degree(tree, theta, x, alpha);
  if (!(total > 0.0)) {
    if (x == tree.root()) throw StuckState("no remaining crossings out of the root");
    return tree.parent(x);
  }
  double u = uniform01(rng) * total;
  Vertex last = kNoVertex;
  for (Vertex y : tree.neighbours(x)) {
    const double w = modified_count(tree, theta, x, y, alpha);
    if (w < 0.0) throw StuckState("negative modified count at " + tree.id(x));
    if (w <= 0.0) continue;
    if (u < w) return y;
    u -= w;
    last = y;
  }
  return last;
}

namespace {

void check_compatible(const RootedTree& tree, const LocalTimeField& lambda, const CrossingNetwork& n, double alpha) {
  check_admissible(tree, lambda, alpha);
  if (n.size() != tree.size()) throw IncompatibleInputs("network size does not match the tree");
  if (!is_sourceless(tree, n)) throw IncompatibleInputs("initial network must be sourceless");
  for (Vertex v = 1; v < tree.size(); ++v) {
    const bool supp = lambda[v] > 0.0;
    if (!supp && (n.down[v] > 0 || n.up[v] > 0))
      throw IncompatibleInputs("network has crossings outside the support at edge to " + tree.id(v));
    if (supp && alpha == 0.0 && n.down[v] == 0)
      throw IncompatibleInputs("alpha = 0 network leaves a supported edge uncrossed at " + tree.id(v));
  }
}

}  // namespace

InversionRun run_vertex_edge_repelling(const RootedTree& tree, const LocalTimeField& lambda, const CrossingNetwork& n,
                                       double alpha, Rng& rng) {
  check_compatible(tree, lambda, n, alpha);
  InversionRun run;
  run.initial_lambda = lambda;
  run.initial_network = n;
  run.alpha = alpha;
  run.mode = InversionMode::VertexEdge;
  RemainingState st{n, lambda, tree.root(), 0.0};
  run.path.start = tree.root();
  for (;;) {
    if (run.path.jumps.size() >= kMaxJumps) {
      run.log.terminal = TerminalCause::ExplosionCap;
      break;
    }
    const Vertex x = st.current;
    const double lam = st.lambda_rem[x];
    const double m = modified_degree(tree, st.theta, x, alpha);
    if (x == tree.root() && m == 0.0) {
      st.consume_time(lam);
      run.log.terminal = TerminalCause::RootTimeExhausted;
      break;
    }
    Vertex target;
    EventCause cause;
    if (m > 0.0) {
      // scaled Beta(1, m) holding time
      const double h = lam * -std::expm1(std::log(uniform01(rng)) / m);
      st.consume_time(h);
      target = jump_chain_step(tree, st.theta, x, alpha, rng);
      cause = EventCause::RateClock;
    } else {
      st.consume_time(lam);
      target = tree.parent(x);
      cause = EventCause::Resurrect;
    }
    st.apply_jump(tree, target);
    run.path.jumps.push_back({st.clock, target});
    run.log.events.push_back({st.clock, x, target, cause});
  }
  run.path.lifetime = st.clock;
  run.terminal_lambda = st.lambda_rem;
  run.terminal_theta = st.theta;
  return run;
}

InversionRun run_vertex_repelling_mixture(const RootedTree& tree, const LocalTimeField& lambda, double alpha, Rng& rng) {
  const CrossingNetwork n = sample_alpha_network(tree, lambda, alpha, tree.root(), rng);
  InversionRun run = run_vertex_edge_repelling(tree, lambda, n, alpha, rng);
  run.mode = InversionMode::Mixture;
  return run;
}

InversionRun run_jump_chain_only(const RootedTree& tree, const LocalTimeField& lambda, double alpha, Rng& rng) {
  const CrossingNetwork n = sample_alpha_network(tree, lambda, alpha, tree.root(), rng);
  InversionRun run;
  run.initial_lambda = lambda;
  run.initial_network = n;
  run.alpha = alpha;
  run.mode = InversionMode::JumpChainOnly;
  RemainingState st{n, lambda, tree.root(), 0.0};
  run.path.start = tree.root();
  while (!(st.current == tree.root() && st.theta.out_degree(tree, st.current) == 0)) {
    const Vertex x = st.current;
    const Vertex y = jump_chain_step(tree, st.theta, x, alpha, rng);
    st.apply_jump(tree, y);
    const double t = static_cast<double>(run.path.jumps.size() + 1);
    run.path.jumps.push_back({t, y});
    run.log.events.push_back({t, x, y, EventCause::RateClock});
  }
  run.log.terminal = TerminalCause::RootTimeExhausted;
  run.path.lifetime = static_cast<double>(run.path.jumps.size());
  run.terminal_lambda = lambda;
  run.terminal_theta = st.theta;
  return run;
}

double vertex_repelling_rate(double cstar, double lam_x, double lam_y, double alpha, bool to_parent) {
  if (!(lam_y > 0.0)) return 0.0;
  const double z = 2.0 * cstar * std::sqrt(lam_x * lam_y);
  const double pre = cstar * std::sqrt(lam_y / lam_x);
  return to_parent ? pre * bessel_i_ratio(alpha - 1.0, alpha, z) : pre * bessel_i_ratio(alpha, alpha - 1.0, z);
}

namespace {

// log(Λ^expo · I_order(2c sqrt(Λ Λy))), with its limit at Λ = 0.
double log_potential(double expo, double order, double c, double lam, double lam_y) {
  if (lam > 0.0) return expo * std::log(lam) + log_bessel_i(order, 2.0 * c * std::sqrt(lam * lam_y));
  const double eff = order == -1.0 ? 1.0 : order;
  const double power = expo + 0.5 * eff;
  if (power > 1e-15) return -kInf;
  if (power < -1e-15) return kInf;
  if (eff == 0.0) return 0.0;
  return eff * std::log(c * std::sqrt(lam_y)) - log_gamma(eff + 1.0);
}

}  // namespace

VertexRepellingProcess::VertexRepellingProcess(const RootedTree& tree, LocalTimeField lambda, double alpha)
    : tree_(&tree), lambda_(std::move(lambda)), alpha_(alpha) {
  check_admissible(tree, lambda_, alpha);
}

Sojourn VertexRepellingProcess::sojourn() const {
  Sojourn s;
  const Vertex x = current_;
  const double lx = lambda_[x];
  s.horizon = lx;
  for (Vertex y : tree_->neighbours(x)) {
    const double ly = lambda_[y];
    if (!(ly > 0.0)) continue;
    const double c = tree_->cstar(x, y);
    const bool up = x != 0 && tree_->parent(x) == y;
    // parent: G = Λ^{α/2} I_α ; child: H = Λ^{(1−α)/2} I_{α−1}; hazard = log G(Λx) − log G(Λx − s)
    const double expo = up ? 0.5 * alpha_ : 0.5 * (1.0 - alpha_);
    const double order = up ? alpha_ : alpha_ - 1.0;
    const double l0 = log_potential(expo, order, c, lx, ly);
    const double a = alpha_;
    Clock k;
    k.target = y;
    k.rate = [=](double t) { return vertex_repelling_rate(c, lx - t, ly, a, up); };
    k.hazard = [=](double t) {
      const double rem = lx - t;
      return l0 - log_potential(expo, order, c, rem > 0.0 ? rem : 0.0, ly);
    };
    s.clocks.push_back(std::move(k));
  }
  return s;
}

void VertexRepellingProcess::advance(double dt) {
  double& l = lambda_[current_];
  l = dt >= l ? 0.0 : l - dt;
}

FireResult VertexRepellingProcess::fire(const Clock& clock, Rng&) {
  current_ = clock.target;
  return {EventCause::RateClock, current_, true};
}

Vertex VertexRepellingProcess::resurrect() {
  current_ = tree_->parent(current_);
  return current_;
}

InversionRun run_vertex_repelling_direct(const RootedTree& tree, const LocalTimeField& lambda, double alpha, Rng& rng) {
  VertexRepellingProcess proc(tree, lambda, alpha);
  Caps caps;
  caps.max_jumps = kMaxJumps;
  EngineRun er = run_with_resurrection(proc, rng, caps);
  InversionRun run;
  run.path = std::move(er.path);
  run.log = std::move(er.log);
  run.initial_lambda = lambda;
  run.alpha = alpha;
  run.mode = InversionMode::Direct;
  run.terminal_lambda = proc.remaining();
  return run;
}

InversionRun run_inversion(InversionMode mode, const RootedTree& tree, const LocalTimeField& lambda, double alpha,
                           Rng& rng, const CrossingNetwork* network) {
  switch (mode) {
    case InversionMode::JumpChainOnly: return run_jump_chain_only(tree, lambda, alpha, rng);
    case InversionMode::VertexEdge:
      if (!network) throw ValidationError("vertex-edge mode needs a crossing network");
      return run_vertex_edge_repelling(tree, lambda, *network, alpha, rng);
    case InversionMode::Mixture: return run_vertex_repelling_mixture(tree, lambda, alpha, rng);
    case InversionMode::Direct: return run_vertex_repelling_direct(tree, lambda, alpha, rng);
  }
  throw ValidationError("unknown inversion mode");
}

}  // namespace repel
