// Layered directed graph that shadows a distributed pub/sub system.
//
// Members are either active (components that execute work) or passive
// (distributors such as topics). Layer 0 carries the communication structure
// and is typed: active->active (send), active->passive (publish),
// passive->active (subscribe). Layers 1..N-1 each form a rooted tree or
// forest (at most one parent per member, no cycles); layer 1 is reserved for
// the OS process tree by convention.
//
// Mutations go through a single writer; queries may run concurrently and
// observe consistent snapshots (guarded by a shared mutex internally).

#pragma once

#include <map>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "shadowtrace/errors.hpp"

namespace shadowtrace {

using MemberId = std::string;
using AttributeVector = std::map<std::string, double>;
using FieldSet = std::set<std::string>;

enum class MemberKind { Active, Passive };
enum class Direction { Predecessors, Successors };
enum class KindFilter { All, ActiveOnly, PassiveOnly };

const char* to_string(MemberKind kind);
MemberKind kind_from_string(const std::string& text);

struct Edge {
  MemberId src;
  MemberId dst;
  int layer = 0;

  auto operator<=>(const Edge&) const = default;
};

// Attribute field names declared per member kind at graph creation. Every
// member of a kind carries exactly these fields.
struct AttributeSchema {
  FieldSet active;
  FieldSet passive;

  const FieldSet& fields(MemberKind kind) const {
    return kind == MemberKind::Active ? active : passive;
  }
};

struct CommSubgraph {
  std::set<MemberId> members;  // members incident to at least one layer-0 edge
  std::vector<Edge> edges;     // sorted (src, dst)
};

struct TreeView {
  int layer = 0;
  MemberId root;
  std::set<MemberId> members;
  std::map<MemberId, MemberId> parent;                 // root has no entry
  std::map<MemberId, std::vector<MemberId>> children;  // sorted by id
};

class SystemGraph {
 public:
  SystemGraph(AttributeSchema schema, int layer_count);

  SystemGraph(const SystemGraph& other);
  SystemGraph& operator=(const SystemGraph& other);
  SystemGraph(SystemGraph&& other) noexcept;
  SystemGraph& operator=(SystemGraph&& other) noexcept;

  // -- mutations (single writer) --

  void add_member(const MemberId& id, MemberKind kind, const AttributeVector& attrs);

  // Replace a member's attributes; the field set must still match the schema.
  void set_attributes(const MemberId& id, const AttributeVector& attrs);

  // Idempotent for an existing (src, dst, layer) triple. Rejects self loops,
  // layer-0 kind violations and tree-layer violations (second parent, cycle).
  void add_edge(const MemberId& src, const MemberId& dst, int layer);

  // -- queries (shared readers) --

  bool has_member(const MemberId& id) const;
  bool has_edge(const MemberId& src, const MemberId& dst, int layer) const;
  MemberKind kind(const MemberId& id) const;
  AttributeVector attributes(const MemberId& id) const;

  std::set<MemberId> member_ids() const;
  std::set<MemberId> member_ids(MemberKind kind) const;
  std::size_t member_count() const;
  std::size_t member_count(MemberKind kind) const;
  std::size_t edge_count() const;
  std::size_t edge_count(int layer) const;

  // Direct layer-0 neighbors of `id`, optionally restricted by kind.
  std::set<MemberId> neighbors(const MemberId& id, Direction direction,
                               KindFilter filter = KindFilter::All) const;

  // Active members reachable from an active `id` in one logical hop: through
  // one distributor (publish then subscribe) or over a direct send edge.
  std::set<MemberId> active_peers(const MemberId& id, Direction direction) const;

  CommSubgraph comm_subgraph() const;

  // Rooted tree view of layer `layer` (>= 1). Throws MultipleRoots unless the
  // layer's edges induce exactly one root.
  TreeView tree_subgraph(int layer) const;

  std::vector<Edge> edges() const;          // all layers, sorted (layer, src, dst)
  std::vector<Edge> edges(int layer) const;

  int layer_count() const { return layer_count_; }
  const AttributeSchema& schema() const { return schema_; }

  // Full invariant re-scan: kind typing on layer 0, in-degree <= 1 and
  // acyclicity on tree layers, schema conformance. Throws on violation.
  void validate() const;

 private:
  struct MemberRecord {
    MemberKind kind;
    AttributeVector attrs;
  };
  struct Adjacency {
    std::map<MemberId, std::set<MemberId>> out;
    std::map<MemberId, std::set<MemberId>> in;
  };

  const MemberRecord& record(const MemberId& id) const;
  void check_schema(MemberKind kind, const AttributeVector& attrs) const;
  bool would_cycle(const MemberId& src, const MemberId& dst, int layer) const;
  std::set<MemberId> roots_of_layer(int layer) const;

  AttributeSchema schema_;
  int layer_count_;
  std::map<MemberId, MemberRecord> members_;
  std::vector<Adjacency> layers_;
  mutable std::shared_mutex mutex_;
};

}  // namespace shadowtrace
