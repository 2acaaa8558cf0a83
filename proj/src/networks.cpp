#include "repel/networks.hpp"

#include <cmath>
#include <limits>

#include "repel/errors.hpp"
#include "repel/special_functions.hpp"

namespace repel {

std::int64_t CrossingNetwork::count(const RootedTree& tree, Vertex x, Vertex y) const {
  const Vertex c = tree.edge_child(x, y);
  return c == y ? down[c] : up[c];
}

std::int64_t& CrossingNetwork::at(const RootedTree& tree, Vertex x, Vertex y) {
  const Vertex c = tree.edge_child(x, y);
  return c == y ? down[c] : up[c];
}

std::int64_t CrossingNetwork::total() const {
  std::int64_t s = 0;
  for (std::size_t v = 1; v < down.size(); ++v) s += down[v] + up[v];
  return s;
}

std::int64_t CrossingNetwork::out_degree(const RootedTree& tree, Vertex x) const {
  std::int64_t s = x == 0 ? 0 : up[x];
  for (Vertex c : tree.children(x)) s += down[c];
  return s;
}

CrossingNetwork operator+(const CrossingNetwork& a, const CrossingNetwork& b) {
  CrossingNetwork r = a;
  for (std::size_t v = 0; v < r.size(); ++v) {
    r.down[v] += b.down[v];
    r.up[v] += b.up[v];
  }
  return r;
}

double modified_count(const RootedTree& tree, const CrossingNetwork& n, Vertex x, Vertex y, double alpha) {
  const double base = static_cast<double>(n.count(tree, x, y));
  return (x != 0 && tree.parent(x) == y) ? base + alpha - 1.0 : base;
}

double modified_degree(const RootedTree& tree, const CrossingNetwork& n, Vertex x, double alpha) {
  const double base = static_cast<double>(n.out_degree(tree, x));
  return x == 0 ? base : base + alpha - 1.0;
}

std::optional<Vertex> network_source(const RootedTree& tree, const CrossingNetwork& n) {
  // Edges with up = down + 1 must form the path from the root to one vertex.
  Vertex deepest = 0;
  std::size_t marked = 0;
  for (Vertex v = 1; v < tree.size(); ++v) {
    if (n.down[v] < 0 || n.up[v] < 0) return std::nullopt;
    const std::int64_t d = n.up[v] - n.down[v];
    if (d == 0) continue;
    if (d != 1) return std::nullopt;
    ++marked;
    if (tree.depth(v) > tree.depth(deepest)) deepest = v;
  }
  if (marked != tree.depth(deepest)) return std::nullopt;
  for (Vertex v = deepest; v != 0; v = tree.parent(v))
    if (n.up[v] - n.down[v] != 1) return std::nullopt;
  return deepest;
}

bool is_sourceless(const RootedTree& tree, const CrossingNetwork& n) {
  auto s = network_source(tree, n);
  return s && *s == 0;
}

double edge_argument(const RootedTree& tree, const LocalTimeField& lambda, Vertex child) {
  return 2.0 * tree.cstar_edge(child) * std::sqrt(lambda[tree.parent(child)] * lambda[child]);
}

namespace {

void check_network_inputs(const RootedTree& tree, const LocalTimeField& lambda, double alpha, Vertex source) {
  check_admissible(tree, lambda, alpha);
  if (source >= tree.size()) throw DomainError("network source is not a vertex");
  if (!(lambda[source] > 0.0)) throw DomainError("network source lies outside the support of the local time field");
}

}  // namespace

CrossingNetwork sample_alpha_network(const RootedTree& tree, const LocalTimeField& lambda, double alpha, Vertex source,
                                     Rng& rng) {
  check_network_inputs(tree, lambda, alpha, source);
  CrossingNetwork n(tree.size());
  for (Vertex v = 1; v < tree.size(); ++v) {
    const bool on_path = tree.is_ancestor_or_self(v, source);
    const std::int64_t k = sample_bessel(on_path ? alpha : alpha - 1.0, edge_argument(tree, lambda, v), rng);
    n.down[v] = k;
    n.up[v] = on_path ? k + 1 : k;
  }
  return n;
}

double network_log_pmf_by_edges(const RootedTree& tree, const LocalTimeField& lambda, double alpha,
                                const CrossingNetwork& n, Vertex source) {
  check_network_inputs(tree, lambda, alpha, source);
  auto s = network_source(tree, n);
  if (!s || *s != source) return -std::numeric_limits<double>::infinity();
  double lp = 0.0;
  for (Vertex v = 1; v < tree.size(); ++v) {
    const bool on_path = tree.is_ancestor_or_self(v, source);
    lp += log_bessel_pmf(on_path ? alpha : alpha - 1.0, edge_argument(tree, lambda, v), n.down[v]);
  }
  return lp;
}

double network_log_pmf(const RootedTree& tree, const LocalTimeField& lambda, double alpha, const CrossingNetwork& n,
                       Vertex source) {
  check_network_inputs(tree, lambda, alpha, source);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  auto s = network_source(tree, n);
  if (!s || *s != source) return kNegInf;
  // K^{λ,i}(n) = σ^{-1} sqrt(λ(x0)/λ(i)) Π_x λ(x)^{n(x)+(α−1)deg(x)/2} Π_{xy} C*^{ň(xy)}/Γ(ň(xy)+1),
  // restricted to the support of λ.
  auto in_supp = [&](Vertex v) { return lambda[v] > 0.0; };
  double lp = 0.0;
  for (Vertex v = 1; v < tree.size(); ++v) {
    if (in_supp(v)) continue;
    if (n.down[v] != 0 || n.up[v] != 0) return kNegInf;
  }
  for (Vertex v = 1; v < tree.size(); ++v) {
    if (!in_supp(v)) continue;
    const bool on_path = tree.is_ancestor_or_self(v, source);
    lp -= log_bessel_i(on_path ? alpha : alpha - 1.0, edge_argument(tree, lambda, v));
  }
  lp += 0.5 * (std::log(lambda[0]) - std::log(lambda[source]));
  for (Vertex x = 0; x < tree.size(); ++x) {
    if (!in_supp(x)) continue;
    std::size_t deg = 0;
    for (Vertex y : tree.neighbours(x))
      if (in_supp(y)) ++deg;
    const double expo = static_cast<double>(n.out_degree(tree, x)) + 0.5 * (alpha - 1.0) * deg;
    lp += expo * std::log(lambda[x]);
    for (Vertex y : tree.neighbours(x)) {
      if (!in_supp(y)) continue;
      const double nc = modified_count(tree, n, x, y, alpha);
      if (nc <= -1.0) return kNegInf;  // 1/Γ(0) = 0
      lp += nc * std::log(tree.cstar(x, y)) - log_gamma(nc + 1.0);
    }
  }
  return lp;
}

void RemainingState::apply_jump(const RootedTree& tree, Vertex target) {
  if (!tree.adjacent(current, target)) throw NoCrossingLeft("jump between non-adjacent vertices");
  std::int64_t& k = theta.at(tree, current, target);
  if (k < 1) throw NoCrossingLeft("no remaining crossing " + tree.id(current) + "->" + tree.id(target));
  --k;
  current = target;
}

void RemainingState::consume_time(double dt) {
  if (dt < 0.0) throw TimeOverdraft("negative time consumption");
  double& rem = lambda_rem[current];
  if (dt > rem) {
    if (dt > rem * (1.0 + 1e-12) + 1e-300) throw TimeOverdraft("consumption exceeds remaining local time");
    dt = rem;
  }
  rem -= dt;
  clock += dt;
}

RemainingState theta_apply_jump(const RootedTree& tree, RemainingState state, Vertex target) {
  state.apply_jump(tree, target);
  return state;
}

RemainingState theta_consume_time(RemainingState state, double dt) {
  state.consume_time(dt);
  return state;
}

}  // namespace repel
