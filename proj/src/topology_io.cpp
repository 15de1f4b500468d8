#include "shadowtrace/topology_io.hpp"

namespace shadowtrace {

json topology_to_json(const SystemGraph& graph) {
  json schema = json::object();
  schema["active"] = graph.schema().active;
  schema["passive"] = graph.schema().passive;
  schema["layer_count"] = graph.layer_count();

  json members = json::array();
  for (const MemberId& id : graph.member_ids()) {
    json m = json::object();
    m["id"] = id;
    m["kind"] = to_string(graph.kind(id));
    m["attrs"] = graph.attributes(id);
    members.push_back(std::move(m));
  }

  json edges = json::array();
  for (const Edge& e : graph.edges()) {
    json entry = json::object();
    entry["src"] = e.src;
    entry["dst"] = e.dst;
    entry["layer"] = e.layer;
    edges.push_back(std::move(entry));
  }

  json doc = json::object();
  doc["schema"] = std::move(schema);
  doc["members"] = std::move(members);
  doc["edges"] = std::move(edges);
  return doc;
}

SystemGraph topology_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("schema") || !doc.contains("members") ||
      !doc.contains("edges")) {
    throw Error(ErrorCode::ParseError, "topology document needs schema/members/edges");
  }
  try {
    const json& schema = doc.at("schema");
    AttributeSchema fields;
    for (const auto& f : schema.at("active")) fields.active.insert(f.get<std::string>());
    for (const auto& f : schema.at("passive")) fields.passive.insert(f.get<std::string>());
    SystemGraph graph(std::move(fields), schema.at("layer_count").get<int>());

    for (const auto& m : doc.at("members")) {
      AttributeVector attrs;
      for (auto it = m.at("attrs").begin(); it != m.at("attrs").end(); ++it) {
        attrs[it.key()] = it.value().get<double>();
      }
      graph.add_member(m.at("id").get<std::string>(),
                       kind_from_string(m.at("kind").get<std::string>()), attrs);
    }
    for (const auto& e : doc.at("edges")) {
      graph.add_edge(e.at("src").get<std::string>(), e.at("dst").get<std::string>(),
                     e.at("layer").get<int>());
    }
    return graph;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("topology document: ") + e.what());
  }
}

std::string serialize_topology(const SystemGraph& graph) {
  return dump_canonical(topology_to_json(graph)) + "\n";
}

void save_topology(const std::filesystem::path& path, const SystemGraph& graph) {
  write_file(path, serialize_topology(graph));
}

SystemGraph load_topology(const std::filesystem::path& path) {
  return topology_from_json(parse_json(read_file(path), path.string()));
}

}  // namespace shadowtrace
