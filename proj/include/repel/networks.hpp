#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "repel/rng.hpp"
#include "repel/tree.hpp"

namespace repel {

// Directed crossing counts; edge {p(v), v} is indexed by its child v.
// down[v] = n(p(v) -> v), up[v] = n(v -> p(v)). Index 0 is unused.
struct CrossingNetwork {
  std::vector<std::int64_t> down, up;

  CrossingNetwork() = default;
  explicit CrossingNetwork(std::size_t n_vertices) : down(n_vertices, 0), up(n_vertices, 0) {}

  std::size_t size() const { return down.size(); }
  std::int64_t count(const RootedTree& tree, Vertex x, Vertex y) const;
  std::int64_t& at(const RootedTree& tree, Vertex x, Vertex y);
  std::int64_t total() const;
  // n(x) = Σ_y n(xy)
  std::int64_t out_degree(const RootedTree& tree, Vertex x) const;

  friend bool operator==(const CrossingNetwork&, const CrossingNetwork&) = default;
};

CrossingNetwork operator+(const CrossingNetwork& a, const CrossingNetwork& b);

// ň(xy) = n(xy) + (α−1)·1{y = p(x)} and ň(x) = Σ_y ň(xy).
double modified_count(const RootedTree& tree, const CrossingNetwork& n, Vertex x, Vertex y, double alpha);
double modified_degree(const RootedTree& tree, const CrossingNetwork& n, Vertex x, double alpha);

// The vertex i with ∂n = (x0, i) (the root when sourceless), or nothing if n has other sources.
std::optional<Vertex> network_source(const RootedTree& tree, const CrossingNetwork& n);
bool is_sourceless(const RootedTree& tree, const CrossingNetwork& n);

// Bessel argument 2 C* sqrt(λ(p(v)) λ(v)) of the edge indexed by v.
double edge_argument(const RootedTree& tree, const LocalTimeField& lambda, Vertex child);

CrossingNetwork sample_alpha_network(const RootedTree& tree, const LocalTimeField& lambda, double alpha,
                                     Vertex source, Rng& rng);
double network_log_pmf(const RootedTree& tree, const LocalTimeField& lambda, double alpha, const CrossingNetwork& n,
                       Vertex source);
// Same law evaluated as a product of per-edge Bessel pmfs.
double network_log_pmf_by_edges(const RootedTree& tree, const LocalTimeField& lambda, double alpha,
                                const CrossingNetwork& n, Vertex source);

// Remaining crossings Θ, remaining local time Λ, walker position and elapsed time.
struct RemainingState {
  CrossingNetwork theta;
  LocalTimeField lambda_rem;
  Vertex current = 0;
  double clock = 0.0;

  void apply_jump(const RootedTree& tree, Vertex target);
  void consume_time(double dt);
};

RemainingState theta_apply_jump(const RootedTree& tree, RemainingState state, Vertex target);
RemainingState theta_consume_time(RemainingState state, double dt);

}  // namespace repel
