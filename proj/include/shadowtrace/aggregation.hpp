// Top-down aggregation over tree layers and the OS process tree.
//
// accumulate() computes, for every member of a tree layer, the sum of the
// attribute vectors of its whole descendant subtree: each member maps to
// sum over children c of (accumulated(c) + attrs(c)). Leaves map to the zero
// vector; a member's own attributes are charged to its parent, not itself.
//
// Process snapshots become graph members named "proc:<pid>" so tree queries
// and accumulation work uniformly on them. When a snapshot has several root
// processes, a passive "proc:virtual-root" member is inserted above them.

#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "shadowtrace/canonical_json.hpp"
#include "shadowtrace/graph.hpp"

namespace shadowtrace {

struct AccumulationResult {
  int layer = 0;
  std::map<MemberId, AttributeVector> accumulated;
};

// Sums run over the requested fields only; a field a member does not carry
// contributes zero. Children are folded in id order so floating-point
// results are deterministic.
AccumulationResult accumulate(const SystemGraph& graph, int layer, const FieldSet& fields);

struct ProcessRecord {
  long long pid = 0;
  long long ppid = 0;  // 0 = no parent
  std::string name;
  AttributeVector metrics;  // e.g. cpu_fraction [0..1], rss_bytes
};

inline constexpr const char* kProcessPrefix = "proc:";
inline const MemberId kVirtualRootId = "proc:virtual-root";

MemberId process_member_id(long long pid);
bool is_process_member(const MemberId& id);

struct ProcessTreeResult {
  bool virtual_root = false;  // set when the snapshot had more than one root
};

// Upserts process members (active, metrics projected onto the active schema;
// schema fields missing from a record default to zero) and one tree edge per
// parent->child relation. Rebuilding from the same snapshot is a no-op.
ProcessTreeResult build_process_tree(SystemGraph& graph,
                                     const std::vector<ProcessRecord>& records, int layer);

// Attach each component as a child of its process member on the tree layer,
// making component<->process navigation a plain tree query.
void bind_processes(SystemGraph& graph, const std::map<MemberId, long long>& bindings,
                    int layer = 1);

// Process snapshot files are JSON Lines, one record per line.
std::vector<ProcessRecord> process_records_from_jsonl(const std::string& text,
                                                      const std::string& context);
std::vector<ProcessRecord> load_process_snapshot(const std::filesystem::path& path);
std::string serialize_process_snapshot(const std::vector<ProcessRecord>& records);

}  // namespace shadowtrace
