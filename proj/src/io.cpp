#include "repel/io.hpp"

#include <fstream>
#include <sstream>

#include "repel/errors.hpp"

namespace repel {

using json = nlohmann::json;

json field_to_json(const RootedTree& tree, const LocalTimeField& f) {
  json j = json::object();
  for (Vertex v = 0; v < tree.size(); ++v) j[tree.id(v)] = f[v];
  return j;
}

LocalTimeField field_from_json(const RootedTree& tree, const json& j) {
  if (!j.is_object()) throw ParseError("field document must map vertex ids to values");
  LocalTimeField f(tree.size(), 0.0);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number()) throw ParseError("field value for '" + it.key() + "' is not a number");
    f[tree.index(it.key())] = it.value().get<double>();
  }
  return f;
}

json network_to_json(const RootedTree& tree, const CrossingNetwork& n) {
  json j = json::object();
  for (Vertex v = 1; v < tree.size(); ++v) {
    j[tree.id(tree.parent(v)) + "->" + tree.id(v)] = n.down[v];
    j[tree.id(v) + "->" + tree.id(tree.parent(v))] = n.up[v];
  }
  return j;
}

CrossingNetwork network_from_json(const RootedTree& tree, const json& j) {
  if (!j.is_object()) throw ParseError("network document must map directed edges to counts");
  CrossingNetwork n(tree.size());
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const auto pos = key.find("->");
    if (pos == std::string::npos) throw ParseError("network key '" + key + "' is not of the form x->y");
    const Vertex x = tree.index(key.substr(0, pos)), y = tree.index(key.substr(pos + 2));
    const auto k = it.value().get<std::int64_t>();
    if (k < 0) throw ValidationError("negative crossing count at " + key);
    n.at(tree, x, y) = k;
  }
  return n;
}

json path_to_json(const RootedTree& tree, const PathRecord& p) {
  json jumps = json::array();
  for (const auto& jm : p.jumps) jumps.push_back(json::array({jm.time, tree.id(jm.target)}));
  return json{{"start", tree.id(p.start)}, {"jumps", jumps}, {"lifetime", p.lifetime}, {"killed", p.killed}};
}

PathRecord path_from_json(const RootedTree& tree, const json& j) {
  PathRecord p;
  try {
    p.start = tree.index(j.at("start").get<std::string>());
    for (const auto& jm : j.at("jumps")) p.jumps.push_back({jm.at(0).get<double>(), tree.index(jm.at(1).get<std::string>())});
    p.lifetime = j.at("lifetime").get<double>();
    p.killed = j.value("killed", false);
  } catch (const json::exception& e) {
    throw ParseError(std::string("path document: ") + e.what());
  }
  validate_path(tree, p);
  return p;
}

json config_to_json(const RootedTree& tree, const EdgeConfiguration& o) {
  json j = json::object();
  for (Vertex v = 1; v < tree.size(); ++v) j[tree.id(tree.parent(v)) + "-" + tree.id(v)] = static_cast<int>(o[v]);
  return j;
}

EdgeConfiguration config_from_json(const RootedTree& tree, const json& j) {
  if (!j.is_object()) throw ParseError("configuration document must map edges to 0/1");
  EdgeConfiguration o(tree.size(), 0);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const auto pos = key.find('-');
    if (pos == std::string::npos) throw ParseError("configuration key '" + key + "' is not of the form x-y");
    const Vertex x = tree.index(key.substr(0, pos)), y = tree.index(key.substr(pos + 1));
    o[tree.edge_child(x, y)] = it.value().get<int>() ? 1 : 0;
  }
  return o;
}

json triple_to_json(const RootedTree& tree, const RayKnightTriple& t) {
  return json{{"alpha", t.alpha},
              {"u", t.u},
              {"phi0", field_to_json(tree, t.phi0)},
              {"phiU", field_to_json(tree, t.phiU)},
              {"n0", network_to_json(tree, t.n0)},
              {"nU", network_to_json(tree, t.nU)},
              {"path", path_to_json(tree, t.path)}};
}

RayKnightTriple triple_from_json(const RootedTree& tree, const json& j) {
  RayKnightTriple t;
  try {
    t.alpha = j.at("alpha").get<double>();
    t.u = j.at("u").get<double>();
    t.phi0 = field_from_json(tree, j.at("phi0"));
    t.phiU = field_from_json(tree, j.at("phiU"));
    t.n0 = network_from_json(tree, j.at("n0"));
    t.nU = network_from_json(tree, j.at("nU"));
    t.path = path_from_json(tree, j.at("path"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("triple document: ") + e.what());
  }
  return t;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

}  // namespace repel
