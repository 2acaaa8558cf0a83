#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "repel/jump_engine.hpp"
#include "repel/networks.hpp"
#include "repel/rng.hpp"
#include "repel/tree.hpp"

namespace repel {

enum class InversionMode { JumpChainOnly, VertexEdge, Mixture, Direct };

const char* mode_name(InversionMode m);
InversionMode parse_mode(const std::string& s);

struct InversionRun {
  PathRecord path;
  LocalTimeField initial_lambda;
  std::optional<CrossingNetwork> initial_network;
  double alpha = 0.0;
  InversionMode mode = InversionMode::Direct;
  EventLog log;
  LocalTimeField terminal_lambda;
  std::optional<CrossingNetwork> terminal_theta;

  std::size_t jump_count() const { return path.jumps.size(); }
  std::size_t resurrect_count() const { return log.count(EventCause::Resurrect); }
};

// Jump-chain law ň(xy)/ň(x) from x, or the parent with probability 1 when ň(x) = 0.
std::vector<std::pair<Vertex, double>> jump_chain_probabilities(const RootedTree& tree, const CrossingNetwork& theta,
                                                                Vertex x, double alpha);
Vertex jump_chain_step(const RootedTree& tree, const CrossingNetwork& theta, Vertex x, double alpha, Rng& rng);

InversionRun run_vertex_edge_repelling(const RootedTree& tree, const LocalTimeField& lambda, const CrossingNetwork& n,
                                       double alpha, Rng& rng);
InversionRun run_vertex_repelling_mixture(const RootedTree& tree, const LocalTimeField& lambda, double alpha, Rng& rng);
InversionRun run_vertex_repelling_direct(const RootedTree& tree, const LocalTimeField& lambda, double alpha, Rng& rng);
// Reversed jump chain on a sampled network; jump k happens at time k.
InversionRun run_jump_chain_only(const RootedTree& tree, const LocalTimeField& lambda, double alpha, Rng& rng);
InversionRun run_inversion(InversionMode mode, const RootedTree& tree, const LocalTimeField& lambda, double alpha,
                           Rng& rng, const CrossingNetwork* network = nullptr);

// Jump rate from x to neighbour y given remaining local times; zero when lam_y = 0.
double vertex_repelling_rate(double cstar, double lam_x, double lam_y, double alpha, bool to_parent);

// The vertex repelling process as a T-terminated rate spec with closed-form integrated hazards.
class VertexRepellingProcess : public TerminatedRates {
 public:
  VertexRepellingProcess(const RootedTree& tree, LocalTimeField lambda, double alpha);
  Vertex current() const override { return current_; }
  Sojourn sojourn() const override;
  void advance(double dt) override;
  FireResult fire(const Clock& clock, Rng& rng) override;
  Vertex resurrect() override;
  const LocalTimeField& remaining() const { return lambda_; }

 private:
  const RootedTree* tree_;
  LocalTimeField lambda_;
  double alpha_;
  Vertex current_ = 0;
};

// Exact first-step law by brute-force enumeration (tiny instances): completions of the
// walk for α = 0 or at the root, bridge pairings weighted by α^{#loops} otherwise.
std::vector<std::pair<Vertex, double>> pairing_oracle_first_step(const RootedTree& tree, const CrossingNetwork& theta,
                                                                 Vertex x, double alpha);

}  // namespace repel
