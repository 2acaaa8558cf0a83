#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace repel {

using Vertex = std::size_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

struct VertexRecord {
  std::string id;
  std::string parent;  // empty for the root
  double killing = 0.0;
};

// c_fwd = C(from, to), c_bwd = C(to, from).
struct EdgeRecord {
  std::string from;
  std::string to;
  double c_fwd = 0.0;
  double c_bwd = 0.0;
};

// Finite rooted tree with directed conductances and a killing measure.
// Vertices are dense indices in breadth-first order (root = 0, siblings by id),
// so parent(v) < v. Edge {p(v), v} is indexed by its child v.
class RootedTree {
 public:
  RootedTree() = default;

  static RootedTree build(const std::string& root, const std::vector<VertexRecord>& vertices,
                          const std::vector<EdgeRecord>& edges);

  std::size_t size() const { return ids_.size(); }
  Vertex root() const { return 0; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  const std::vector<Vertex>& children(Vertex v) const { return children_[v]; }
  // Parent first (if any), then children.
  const std::vector<Vertex>& neighbours(Vertex v) const { return neighbours_[v]; }
  std::size_t degree(Vertex v) const { return neighbours_[v].size(); }
  std::size_t depth(Vertex v) const { return depth_[v]; }

  const std::string& id(Vertex v) const { return ids_[v]; }
  Vertex index(const std::string& id) const;
  bool has(const std::string& id) const { return index_.count(id) > 0; }

  double c_down(Vertex child) const { return c_down_[child]; }
  double c_up(Vertex child) const { return c_up_[child]; }
  double cstar_edge(Vertex child) const;
  double conductance(Vertex x, Vertex y) const;
  double cstar(Vertex x, Vertex y) const;
  double killing(Vertex v) const { return killing_[v]; }
  double out_rate(Vertex v) const;

  bool adjacent(Vertex x, Vertex y) const;
  // Child vertex indexing the edge {x,y}; x and y must be adjacent.
  Vertex edge_child(Vertex x, Vertex y) const;
  bool is_ancestor_or_self(Vertex a, Vertex b) const;
  bool is_symmetric(double rel_tol = 1e-12) const;
  bool is_recurrent() const;  // no killing off the root

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<Vertex> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<std::vector<Vertex>> neighbours_;
  std::vector<std::size_t> depth_;
  std::vector<double> c_down_, c_up_, killing_;
};

RootedTree make_path_tree(std::size_t n, double c = 1.0);
RootedTree make_path_tree(const std::vector<double>& c_down, const std::vector<double>& c_up);
RootedTree make_star_tree(std::size_t leaves, double c = 1.0);

RootedTree parse_tree_spec(const std::string& text);
std::string serialize_tree_spec(const RootedTree& tree);
RootedTree load_tree_spec(const std::string& path);

std::vector<double> hitting_probability(const RootedTree& tree);
RootedTree h_transform(const RootedTree& tree);

// Vertex -> local time (time units).
using LocalTimeField = std::vector<double>;

bool is_admissible(const RootedTree& tree, const LocalTimeField& lambda, double alpha);
void check_admissible(const RootedTree& tree, const LocalTimeField& lambda, double alpha);

struct Jump {
  double time;
  Vertex target;
};

struct PathRecord {
  Vertex start = 0;
  std::vector<Jump> jumps;
  double lifetime = 0.0;
  bool killed = false;

  Vertex end() const { return jumps.empty() ? start : jumps.back().target; }
  Vertex at(double t) const;
};

void validate_path(const RootedTree& tree, const PathRecord& path);
LocalTimeField local_times(const PathRecord& path, std::size_t n_vertices);
// Time-changed trace of the path on the vertex subset `keep`.
PathRecord print_on(const PathRecord& path, const std::vector<bool>& keep);

}  // namespace repel
