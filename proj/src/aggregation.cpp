#include "shadowtrace/aggregation.hpp"

#include <algorithm>

namespace shadowtrace {

AccumulationResult accumulate(const SystemGraph& graph, int layer, const FieldSet& fields) {
  const TreeView tree = graph.tree_subgraph(layer);

  AccumulationResult result;
  result.layer = layer;

  AttributeVector zero;
  for (const std::string& field : fields) zero[field] = 0.0;
  for (const MemberId& id : tree.members) result.accumulated[id] = zero;

  // Iterative post-order: children are fully folded before their parent.
  std::vector<std::pair<MemberId, bool>> stack{{tree.root, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    auto children_it = tree.children.find(id);
    if (!expanded) {
      stack.emplace_back(id, true);
      if (children_it != tree.children.end()) {
        for (const MemberId& child : children_it->second) stack.emplace_back(child, false);
      }
      continue;
    }
    if (children_it == tree.children.end()) continue;  // leaf stays zero
    AttributeVector& acc = result.accumulated[id];
    for (const MemberId& child : children_it->second) {
      const AttributeVector& child_acc = result.accumulated[child];
      const AttributeVector child_attrs = graph.attributes(child);
      for (const std::string& field : fields) {
        double value = child_acc.at(field);
        auto attr_it = child_attrs.find(field);
        if (attr_it != child_attrs.end()) value += attr_it->second;
        acc[field] += value;
      }
    }
  }
  return result;
}

MemberId process_member_id(long long pid) {
  return kProcessPrefix + std::to_string(pid);
}

bool is_process_member(const MemberId& id) {
  return id.starts_with(kProcessPrefix);
}

namespace {

AttributeVector project_onto_schema(const AttributeVector& metrics, const FieldSet& fields) {
  AttributeVector attrs;
  for (const std::string& field : fields) {
    auto it = metrics.find(field);
    attrs[field] = it != metrics.end() ? it->second : 0.0;
  }
  return attrs;
}

void upsert_member(SystemGraph& graph, const MemberId& id, MemberKind kind,
                   const AttributeVector& attrs) {
  if (graph.has_member(id)) {
    graph.set_attributes(id, attrs);
  } else {
    graph.add_member(id, kind, attrs);
  }
}

}  // namespace

ProcessTreeResult build_process_tree(SystemGraph& graph,
                                     const std::vector<ProcessRecord>& records, int layer) {
  if (layer < 1 || layer >= graph.layer_count()) {
    throw Error(ErrorCode::LayerOutOfRange, "process tree layer " + std::to_string(layer));
  }

  std::map<long long, const ProcessRecord*> by_pid;
  for (const ProcessRecord& rec : records) {
    if (rec.pid <= 0) {
      throw Error(ErrorCode::ParseError, "process pid must be positive");
    }
    if (rec.ppid == rec.pid) {
      throw Error(ErrorCode::CycleDetected, "pid " + std::to_string(rec.pid) + " is its own parent");
    }
    if (!by_pid.emplace(rec.pid, &rec).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate pid " + std::to_string(rec.pid));
    }
  }

  // A record whose ppid is 0 or absent from the snapshot is a root.
  auto parent_of = [&](const ProcessRecord& rec) -> const ProcessRecord* {
    if (rec.ppid == 0) return nullptr;
    auto it = by_pid.find(rec.ppid);
    return it == by_pid.end() ? nullptr : it->second;
  };

  // Corrupt snapshots can close ppid cycles; reject them before mutating.
  std::map<long long, int> state;  // 0 unseen, 1 in progress, 2 done
  for (const auto& [pid, rec] : by_pid) {
    std::vector<long long> path;
    const ProcessRecord* cursor = rec;
    while (cursor != nullptr && state[cursor->pid] == 0) {
      state[cursor->pid] = 1;
      path.push_back(cursor->pid);
      cursor = parent_of(*cursor);
      if (cursor != nullptr && state[cursor->pid] == 1) {
        throw Error(ErrorCode::CycleDetected,
                    "ppid cycle through pid " + std::to_string(cursor->pid));
      }
    }
    for (long long p : path) state[p] = 2;
  }

  std::vector<long long> roots;
  for (const auto& [pid, rec] : by_pid) {
    upsert_member(graph, process_member_id(pid), MemberKind::Active,
                  project_onto_schema(rec->metrics, graph.schema().active));
    if (parent_of(*rec) == nullptr) roots.push_back(pid);
  }
  for (const auto& [pid, rec] : by_pid) {
    if (const ProcessRecord* parent = parent_of(*rec)) {
      graph.add_edge(process_member_id(parent->pid), process_member_id(pid), layer);
    }
  }

  ProcessTreeResult result;
  if (roots.size() > 1) {
    result.virtual_root = true;
    upsert_member(graph, kVirtualRootId, MemberKind::Passive,
                  project_onto_schema({}, graph.schema().passive));
    for (long long pid : roots) {
      graph.add_edge(kVirtualRootId, process_member_id(pid), layer);
    }
  }
  return result;
}

void bind_processes(SystemGraph& graph, const std::map<MemberId, long long>& bindings,
                    int layer) {
  if (layer < 1 || layer >= graph.layer_count()) {
    throw Error(ErrorCode::LayerOutOfRange, "binding layer " + std::to_string(layer));
  }
  for (const auto& [component, pid] : bindings) {
    if (!graph.has_member(component)) {
      throw Error(ErrorCode::UnknownMember, component);
    }
    if (graph.kind(component) != MemberKind::Active) {
      throw Error(ErrorCode::NotActive, component);
    }
    const MemberId proc = process_member_id(pid);
    if (!graph.has_member(proc)) {
      throw Error(ErrorCode::UnknownProcess, proc);
    }
    // A component sits under exactly one process.
    for (const Edge& e : graph.edges(layer)) {
      if (e.dst == component) {
        throw Error(ErrorCode::AlreadyBound, component + " already bound under " + e.src);
      }
    }
    graph.add_edge(proc, component, layer);
  }
}

std::vector<ProcessRecord> process_records_from_jsonl(const std::string& text,
                                                      const std::string& context) {
  std::vector<ProcessRecord> records;
  for (const json& doc : parse_json_lines(text, context)) {
    try {
      ProcessRecord rec;
      rec.pid = doc.at("pid").get<long long>();
      rec.ppid = doc.at("ppid").get<long long>();
      rec.name = doc.value("name", std::string{});
      if (doc.contains("metrics")) {
        for (auto it = doc.at("metrics").begin(); it != doc.at("metrics").end(); ++it) {
          rec.metrics[it.key()] = it.value().get<double>();
        }
      }
      records.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, context + ": " + e.what());
    }
  }
  return records;
}

std::vector<ProcessRecord> load_process_snapshot(const std::filesystem::path& path) {
  return process_records_from_jsonl(read_file(path), path.string());
}

std::string serialize_process_snapshot(const std::vector<ProcessRecord>& records) {
  std::vector<json> lines;
  for (const ProcessRecord& rec : records) {
    json doc = json::object();
    doc["pid"] = rec.pid;
    doc["ppid"] = rec.ppid;
    doc["name"] = rec.name;
    doc["metrics"] = rec.metrics;
    lines.push_back(std::move(doc));
  }
  return dump_canonical_lines(lines);
}

}  // namespace shadowtrace
