#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "repel/errors.hpp"
#include "repel/inversion.hpp"

namespace repel {

namespace {

// Number of walks from x consuming every remaining crossing of theta exactly once.
double count_completions(const RootedTree& tree, CrossingNetwork& theta, Vertex x, std::int64_t left) {
  if (left == 0) return x == tree.root() ? 1.0 : 0.0;
  double total = 0.0;
  for (Vertex y : tree.neighbours(x)) {
    std::int64_t& k = theta.at(tree, x, y);
    if (k == 0) continue;
    --k;
    total += count_completions(tree, theta, y, left - 1);
    ++k;
  }
  return total;
}

std::size_t cycle_count(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) seen[j] = 1;
  }
  return cycles;
}

}  // namespace

std::vector<std::pair<Vertex, double>> pairing_oracle_first_step(const RootedTree& tree, const CrossingNetwork& theta,
                                                                 Vertex x, double alpha) {
  if (theta.total() > 10) throw TooLarge("pairing oracle limited to total count <= 10");
  std::map<Vertex, double> weight;

  if (alpha == 0.0) {
    CrossingNetwork work = theta;
    const std::int64_t left = work.total();
    for (Vertex y : tree.neighbours(x)) {
      std::int64_t& k = work.at(tree, x, y);
      if (k == 0) continue;
      --k;
      weight[y] += count_completions(tree, work, y, left - 1);
      ++k;
    }
  } else {
    // Labeled exits out of x; exit 0 is the parent-direction exit belonging to the bridge in progress.
    std::vector<Vertex> dir;
    if (x != tree.root())
      for (std::int64_t k = 0; k < theta.up[x]; ++k) dir.push_back(tree.parent(x));
    for (Vertex c : tree.children(x))
      for (std::int64_t k = 0; k < theta.down[c]; ++k) dir.push_back(c);
    if (dir.empty()) throw StuckState("no remaining exits at " + tree.id(x));
    std::vector<int> perm(dir.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (x == tree.root()) {
        // no bridge in progress at the root: every exit order is equally likely
        weight[dir[static_cast<std::size_t>(perm[0])]] += 1.0;
      } else {
        // entry of bridge i is followed by exit perm[i]; loops are the cycles
        weight[dir[static_cast<std::size_t>(perm[0])]] += std::pow(alpha, static_cast<double>(cycle_count(perm)));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  double total = 0.0;
  for (auto& [y, w] : weight) total += w;
  std::vector<std::pair<Vertex, double>> out;
  if (total <= 0.0) return out;
  for (auto& [y, w] : weight)
    if (w > 0.0) out.emplace_back(y, w / total);
  return out;
}

}  // namespace repel
