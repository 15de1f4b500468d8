// Topology file format: one JSON document with "schema", "members", "edges".
// Serialization is canonical (sorted keys, 9-significant-digit floats), so
// load -> save round-trips are byte-identical on canonical input.

#pragma once

#include <filesystem>

#include "shadowtrace/canonical_json.hpp"
#include "shadowtrace/graph.hpp"

namespace shadowtrace {

json topology_to_json(const SystemGraph& graph);
SystemGraph topology_from_json(const json& doc);

std::string serialize_topology(const SystemGraph& graph);

void save_topology(const std::filesystem::path& path, const SystemGraph& graph);
SystemGraph load_topology(const std::filesystem::path& path);

}  // namespace shadowtrace
