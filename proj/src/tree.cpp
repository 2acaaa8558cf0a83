#include "repel/tree.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

#include "repel/errors.hpp"

namespace repel {

using json = nlohmann::json;

RootedTree RootedTree::build(const std::string& root, const std::vector<VertexRecord>& vertices,
                             const std::vector<EdgeRecord>& edges) {
  std::map<std::string, const VertexRecord*> by_id;
  for (const auto& v : vertices) {
    if (v.id.empty()) throw ValidationError("vertex with empty id");
    if (!by_id.emplace(v.id, &v).second) throw ValidationError("duplicate vertex id '" + v.id + "'");
    if (!(v.killing >= 0.0) || !std::isfinite(v.killing))
      throw ValidationError("vertex '" + v.id + "': killing must be finite and nonnegative");
  }
  if (!by_id.count(root)) throw ValidationError("root '" + root + "' is not a listed vertex");
  if (!by_id.at(root)->parent.empty()) throw ValidationError("root '" + root + "' has a parent");

  std::map<std::string, std::vector<std::string>> kids;
  for (const auto& v : vertices) {
    if (v.id == root) continue;
    if (v.parent.empty()) throw ValidationError("vertex '" + v.id + "' has no parent (disconnected)");
    if (!by_id.count(v.parent))
      throw ValidationError("vertex '" + v.id + "': unknown parent '" + v.parent + "'");
    if (v.parent == v.id) throw ValidationError("vertex '" + v.id + "' is its own parent");
    kids[v.parent].push_back(v.id);
  }

  // (parent, child) -> (C_pc, C_cp)
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> cond;
  for (const auto& e : edges) {
    const bool known_from = by_id.count(e.from) > 0, known_to = by_id.count(e.to) > 0;
    if (!known_from || !known_to)
      throw ValidationError("edge " + e.from + "-" + e.to + ": unknown endpoint");
    if (!(e.c_fwd > 0.0) || !(e.c_bwd > 0.0) || !std::isfinite(e.c_fwd) || !std::isfinite(e.c_bwd))
      throw ValidationError("edge " + e.from + "-" + e.to + ": conductances must be positive");
    std::pair<std::string, std::string> key;
    std::pair<double, double> val;
    if (by_id.at(e.to)->parent == e.from) {
      key = {e.from, e.to};
      val = {e.c_fwd, e.c_bwd};
    } else if (by_id.at(e.from)->parent == e.to) {
      key = {e.to, e.from};
      val = {e.c_bwd, e.c_fwd};
    } else {
      throw ValidationError("edge " + e.from + "-" + e.to + " does not join a vertex to its parent");
    }
    if (!cond.emplace(key, val).second)
      throw ValidationError("duplicate edge " + e.from + "-" + e.to);
  }

  RootedTree t;
  std::queue<std::string> q;
  q.push(root);
  std::vector<std::string> order;
  while (!q.empty()) {
    std::string cur = q.front();
    q.pop();
    order.push_back(cur);
    auto it = kids.find(cur);
    if (it == kids.end()) continue;
    auto ch = it->second;
    std::sort(ch.begin(), ch.end());
    for (auto& c : ch) q.push(c);
  }
  if (order.size() != vertices.size()) {
    for (const auto& v : vertices)
      if (std::find(order.begin(), order.end(), v.id) == order.end())
        throw ValidationError("vertex '" + v.id + "' is not connected to the root (cycle or disconnection)");
  }

  const std::size_t n = order.size();
  t.ids_ = order;
  for (Vertex i = 0; i < n; ++i) t.index_[order[i]] = i;
  t.parent_.assign(n, kNoVertex);
  t.children_.assign(n, {});
  t.neighbours_.assign(n, {});
  t.depth_.assign(n, 0);
  t.c_down_.assign(n, 0.0);
  t.c_up_.assign(n, 0.0);
  t.killing_.assign(n, 0.0);
  for (Vertex i = 0; i < n; ++i) {
    const VertexRecord& rec = *by_id.at(order[i]);
    t.killing_[i] = rec.killing;
    if (i == 0) continue;
    Vertex p = t.index_.at(rec.parent);
    t.parent_[i] = p;
    t.children_[p].push_back(i);
    t.depth_[i] = t.depth_[p] + 1;
    auto it = cond.find({rec.parent, rec.id});
    if (it == cond.end()) throw ValidationError("missing edge record " + rec.parent + "-" + rec.id);
    t.c_down_[i] = it->second.first;
    t.c_up_[i] = it->second.second;
  }
  for (Vertex i = 0; i < n; ++i) {
    if (i != 0) t.neighbours_[i].push_back(t.parent_[i]);
    for (Vertex c : t.children_[i]) t.neighbours_[i].push_back(c);
  }
  return t;
}

Vertex RootedTree::index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown vertex '" + id + "'");
  return it->second;
}

double RootedTree::cstar_edge(Vertex child) const { return std::sqrt(c_down_[child] * c_up_[child]); }

bool RootedTree::adjacent(Vertex x, Vertex y) const {
  return (x != 0 && parent_[x] == y) || (y != 0 && parent_[y] == x);
}

Vertex RootedTree::edge_child(Vertex x, Vertex y) const {
  if (y != 0 && parent_[y] == x) return y;
  if (x != 0 && parent_[x] == y) return x;
  throw DomainError("vertices " + ids_[x] + " and " + ids_[y] + " are not adjacent");
}

double RootedTree::conductance(Vertex x, Vertex y) const {
  Vertex c = edge_child(x, y);
  return c == y ? c_down_[c] : c_up_[c];
}

double RootedTree::cstar(Vertex x, Vertex y) const { return cstar_edge(edge_child(x, y)); }

double RootedTree::out_rate(Vertex v) const {
  double s = v == 0 ? 0.0 : c_up_[v];
  for (Vertex c : children_[v]) s += c_down_[c];
  return s;
}

bool RootedTree::is_ancestor_or_self(Vertex a, Vertex b) const {
  while (depth_[b] > depth_[a]) b = parent_[b];
  return a == b;
}

bool RootedTree::is_symmetric(double rel_tol) const {
  for (Vertex v = 1; v < size(); ++v)
    if (std::abs(c_down_[v] - c_up_[v]) > rel_tol * std::max(c_down_[v], c_up_[v])) return false;
  return true;
}

bool RootedTree::is_recurrent() const {
  for (Vertex v = 1; v < size(); ++v)
    if (killing_[v] != 0.0) return false;
  return true;
}

RootedTree make_path_tree(const std::vector<double>& c_down, const std::vector<double>& c_up) {
  const std::size_t n = c_down.size() + 1;
  // zero-padded ids keep breadth-first order equal to position
  const std::size_t width = std::to_string(n - 1).size();
  auto name = [&](std::size_t i) {
    std::string s = std::to_string(i);
    return std::string(width - s.size(), '0') + s;
  };
  std::vector<VertexRecord> vs;
  std::vector<EdgeRecord> es;
  for (std::size_t i = 0; i < n; ++i) vs.push_back({name(i), i == 0 ? "" : name(i - 1), 0.0});
  for (std::size_t i = 1; i < n; ++i) es.push_back({name(i - 1), name(i), c_down[i - 1], c_up[i - 1]});
  return RootedTree::build(name(0), vs, es);
}

RootedTree make_path_tree(std::size_t n, double c) {
  return make_path_tree(std::vector<double>(n - 1, c), std::vector<double>(n - 1, c));
}

RootedTree make_star_tree(std::size_t leaves, double c) {
  std::vector<VertexRecord> vs{{"o", "", 0.0}};
  std::vector<EdgeRecord> es;
  for (std::size_t i = 0; i < leaves; ++i) {
    std::string id = "l" + std::to_string(i);
    vs.push_back({id, "o", 0.0});
    es.push_back({"o", id, c, c});
  }
  return RootedTree::build("o", vs, es);
}

RootedTree parse_tree_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("tree spec is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("tree spec must be an object");
    if (!doc.contains("root") || !doc["root"].is_string()) throw ParseError("tree spec: missing string 'root'");
    if (!doc.contains("vertices") || !doc["vertices"].is_array()) throw ParseError("tree spec: missing 'vertices' list");
    const std::string root = doc["root"];
    std::vector<VertexRecord> vs;
    for (const auto& v : doc["vertices"]) {
      if (!v.is_object() || !v.contains("id") || !v["id"].is_string())
        throw ParseError("tree spec: vertex record without string 'id'");
      VertexRecord r;
      r.id = v["id"];
      if (v.contains("parent") && !v["parent"].is_null()) r.parent = v["parent"].get<std::string>();
      if (v.contains("killing")) r.killing = v["killing"].get<double>();
      vs.push_back(r);
    }
    std::vector<EdgeRecord> es;
    if (doc.contains("edges")) {
      for (const auto& e : doc["edges"]) {
        EdgeRecord r;
        if (e.contains("a") && e.contains("b") && e.contains("c")) {
          r.from = e["a"];
          r.to = e["b"];
          r.c_fwd = r.c_bwd = e["c"].get<double>();
        } else if (e.contains("from") && e.contains("to") && e.contains("c_fwd") && e.contains("c_bwd")) {
          r.from = e["from"];
          r.to = e["to"];
          r.c_fwd = e["c_fwd"].get<double>();
          r.c_bwd = e["c_bwd"].get<double>();
        } else {
          throw ParseError("tree spec: edge record needs {a,b,c} or {from,to,c_fwd,c_bwd}");
        }
        es.push_back(r);
      }
    }
    return RootedTree::build(root, vs, es);
  } catch (const json::exception& e) {
    throw ParseError(std::string("tree spec: ") + e.what());
  }
}

std::string serialize_tree_spec(const RootedTree& t) {
  std::vector<Vertex> order(t.size());
  for (Vertex v = 0; v < t.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return t.id(a) < t.id(b); });
  json vs = json::array(), es = json::array();
  for (Vertex v : order) {
    json r{{"id", t.id(v)}};
    if (v != t.root()) r["parent"] = t.id(t.parent(v));
    r["killing"] = t.killing(v);
    vs.push_back(r);
  }
  for (Vertex v : order) {
    if (v == t.root()) continue;
    if (t.c_down(v) == t.c_up(v))
      es.push_back({{"a", t.id(t.parent(v))}, {"b", t.id(v)}, {"c", t.c_down(v)}});
    else
      es.push_back({{"from", t.id(t.parent(v))}, {"to", t.id(v)}, {"c_fwd", t.c_down(v)}, {"c_bwd", t.c_up(v)}});
  }
  json doc{{"root", t.id(t.root())}, {"vertices", vs}, {"edges", es}};
  return doc.dump(2);
}

RootedTree load_tree_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read tree spec '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tree_spec(ss.str());
}

std::vector<double> hitting_probability(const RootedTree& t) {
  const std::size_t n = t.size();
  // h(v) = a(v) h(p(v)), eliminated from the leaves upward.
  std::vector<double> a(n, 1.0);
  for (Vertex v = n; v-- > 1;) {
    double denom = t.killing(v) + t.c_up(v);
    for (Vertex c : t.children(v)) denom += t.c_down(c) * (1.0 - a[c]);
    if (!(denom > 0.0) || !std::isfinite(denom)) throw SingularSystem("harmonic system singular at " + t.id(v));
    a[v] = t.c_up(v) / denom;
  }
  std::vector<double> h(n, 1.0);
  for (Vertex v = 1; v < n; ++v) h[v] = a[v] * h[t.parent(v)];
  return h;
}

RootedTree h_transform(const RootedTree& t) {
  const auto h = hitting_probability(t);
  std::vector<VertexRecord> vs;
  std::vector<EdgeRecord> es;
  for (Vertex v = 0; v < t.size(); ++v) {
    if (!(h[v] > 0.0)) throw DegenerateTransform("hitting probability vanishes at " + t.id(v));
    vs.push_back({t.id(v), v == 0 ? "" : t.id(t.parent(v)), 0.0});
    if (v == 0) continue;
    const Vertex p = t.parent(v);
    es.push_back({t.id(p), t.id(v), h[v] / h[p] * t.c_down(v), h[p] / h[v] * t.c_up(v)});
  }
  return RootedTree::build(t.id(0), vs, es);
}

bool is_admissible(const RootedTree& t, const LocalTimeField& lambda, double alpha) {
  if (lambda.size() != t.size() || !(alpha >= 0.0)) return false;
  if (!(lambda[0] > 0.0)) return false;
  for (Vertex v = 0; v < t.size(); ++v) {
    if (!(lambda[v] >= 0.0) || !std::isfinite(lambda[v])) return false;
    if (alpha > 0.0 && !(lambda[v] > 0.0)) return false;
    if (v != 0 && lambda[v] > 0.0 && !(lambda[t.parent(v)] > 0.0)) return false;
  }
  return true;
}

void check_admissible(const RootedTree& t, const LocalTimeField& lambda, double alpha) {
  if (!is_admissible(t, lambda, alpha)) throw DomainError("local time field is not admissible for this tree and alpha");
}

Vertex PathRecord::at(double t) const {
  Vertex cur = start;
  for (const auto& j : jumps) {
    if (j.time > t) break;
    cur = j.target;
  }
  return cur;
}

void validate_path(const RootedTree& tree, const PathRecord& path) {
  Vertex cur = path.start;
  double last = 0.0;
  for (const auto& j : path.jumps) {
    if (!(j.time >= last)) throw DomainError("path jump times not increasing");
    if (j.target >= tree.size() || !tree.adjacent(cur, j.target)) throw DomainError("path jump between non-adjacent vertices");
    cur = j.target;
    last = j.time;
  }
  if (path.lifetime < last) throw DomainError("path lifetime precedes its last jump");
}

LocalTimeField local_times(const PathRecord& path, std::size_t n) {
  LocalTimeField L(n, 0.0);
  Vertex cur = path.start;
  double last = 0.0;
  for (const auto& j : path.jumps) {
    L[cur] += j.time - last;
    cur = j.target;
    last = j.time;
  }
  L[cur] += path.lifetime - last;
  return L;
}

PathRecord print_on(const PathRecord& path, const std::vector<bool>& keep) {
  PathRecord out;
  out.killed = path.killed;
  Vertex cur = path.start;
  double last = 0.0, clock = 0.0;
  bool started = false;
  Vertex shown = kNoVertex;
  auto visit = [&](Vertex v, double duration) {
    if (!keep[v]) return;
    if (!started) {
      out.start = v;
      shown = v;
      started = true;
    } else if (v != shown) {
      out.jumps.push_back({clock, v});
      shown = v;
    }
    clock += duration;
  };
  for (const auto& j : path.jumps) {
    visit(cur, j.time - last);
    cur = j.target;
    last = j.time;
  }
  visit(cur, path.lifetime - last);
  out.lifetime = clock;
  return out;
}

}  // namespace repel
