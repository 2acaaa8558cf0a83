#pragma once

#include <cstdint>
#include <vector>

#include "repel/forward_sim.hpp"
#include "repel/jump_engine.hpp"
#include "repel/rng.hpp"
#include "repel/tree.hpp"

namespace repel {

// Open flag per edge, indexed by child vertex; index 0 unused.
using EdgeConfiguration = std::vector<std::uint8_t>;

struct ConfigChange {
  double time;
  Vertex edge;       // child vertex of the edge
  bool open;         // state after the change
  bool with_jump;    // caused by a walker move across (or away along) the edge
};

struct PercRun {
  PathRecord path;
  EventLog log;
  EdgeConfiguration initial;
  EdgeConfiguration terminal;
  LocalTimeField terminal_field;  // φ_τu forward, remaining Λ in reverse
  std::vector<ConfigChange> changes;
};

struct ForwardPercolation {
  PercRun run;
  RayKnightTriple triple;
};

// I_{1−α}(z)/I_{α−1}(z), z = 2C sqrt(ℓx ℓy)
double open_probability(double c, double lx, double ly, double alpha);
EdgeConfiguration sample_config_given_field(const RootedTree& tree, const LocalTimeField& ell, double alpha, Rng& rng);
// 𝕂_{1−α}(2C sqrt(ℓx ℓy))
double closure_prob_no_crossing(double c, double lx, double ly, double alpha);
// (C sqrt(ℓx ℓy))^{α−1} / (Γ(α) I_{α−1}(2C sqrt(ℓx ℓy)))
double no_crossing_probability(double c, double lx, double ly, double alpha);
// Opening rate of a closed edge {x,y} while the walker sits at x.
double opening_rate(double c, double phi_x, double phi_y, double alpha);

struct ReverseRates {
  double parent_keep = 0.0;   // jump to parent, edge stays open
  double parent_close = 0.0;  // jump to parent, edge closes
  double child_keep = 0.0;    // jump to child across an open edge
  double child_close = 0.0;   // close an open child edge, no jump
};
ReverseRates percolation_reverse_rates(double c, double lam_x, double lam_y, double alpha);

ForwardPercolation run_forward_percolation(const RootedTree& tree, double alpha, double u, Rng& rng);
PercRun run_percolation_vertex_repelling(const RootedTree& tree, const LocalTimeField& lambda,
                                         const EdgeConfiguration& config, double alpha, Rng& rng);

void check_percolation_inputs(const RootedTree& tree, double alpha);

}  // namespace repel
