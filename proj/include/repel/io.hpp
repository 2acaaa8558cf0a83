#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "repel/forward_sim.hpp"
#include "repel/inversion.hpp"
#include "repel/networks.hpp"
#include "repel/percolation.hpp"
#include "repel/tree.hpp"

namespace repel {

nlohmann::json field_to_json(const RootedTree& tree, const LocalTimeField& f);
LocalTimeField field_from_json(const RootedTree& tree, const nlohmann::json& j);
// Directed edges keyed "x->y".
nlohmann::json network_to_json(const RootedTree& tree, const CrossingNetwork& n);
CrossingNetwork network_from_json(const RootedTree& tree, const nlohmann::json& j);
nlohmann::json path_to_json(const RootedTree& tree, const PathRecord& p);
PathRecord path_from_json(const RootedTree& tree, const nlohmann::json& j);
nlohmann::json config_to_json(const RootedTree& tree, const EdgeConfiguration& o);
EdgeConfiguration config_from_json(const RootedTree& tree, const nlohmann::json& j);

nlohmann::json triple_to_json(const RootedTree& tree, const RayKnightTriple& t);
RayKnightTriple triple_from_json(const RootedTree& tree, const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace repel
