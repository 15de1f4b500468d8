#include "shadowtrace/graph.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace shadowtrace {

namespace {

bool layer0_pair_allowed(MemberKind src, MemberKind dst) {
  // send (A->A), publish (A->P), subscribe (P->A); P->P carries no meaning.
  return !(src == MemberKind::Passive && dst == MemberKind::Passive);
}

}  // namespace

const char* to_string(MemberKind kind) {
  return kind == MemberKind::Active ? "active" : "passive";
}

MemberKind kind_from_string(const std::string& text) {
  if (text == "active") return MemberKind::Active;
  if (text == "passive") return MemberKind::Passive;
  throw Error(ErrorCode::ParseError, "unknown member kind: " + text);
}

SystemGraph::SystemGraph(AttributeSchema schema, int layer_count)
    : schema_(std::move(schema)), layer_count_(layer_count) {
  if (layer_count_ < 1) {
    throw Error(ErrorCode::LayerOutOfRange, "layer count must be >= 1 (layer 0 always exists)");
  }
  layers_.resize(static_cast<std::size_t>(layer_count_));
}

SystemGraph::SystemGraph(const SystemGraph& other) {
  std::shared_lock lock(other.mutex_);
  schema_ = other.schema_;
  layer_count_ = other.layer_count_;
  members_ = other.members_;
  layers_ = other.layers_;
}

SystemGraph& SystemGraph::operator=(const SystemGraph& other) {
  if (this == &other) return *this;
  SystemGraph copy(other);
  *this = std::move(copy);
  return *this;
}

SystemGraph::SystemGraph(SystemGraph&& other) noexcept {
  std::unique_lock lock(other.mutex_);
  schema_ = std::move(other.schema_);
  layer_count_ = other.layer_count_;
  members_ = std::move(other.members_);
  layers_ = std::move(other.layers_);
}

SystemGraph& SystemGraph::operator=(SystemGraph&& other) noexcept {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  schema_ = std::move(other.schema_);
  layer_count_ = other.layer_count_;
  members_ = std::move(other.members_);
  layers_ = std::move(other.layers_);
  return *this;
}

const SystemGraph::MemberRecord& SystemGraph::record(const MemberId& id) const {
  auto it = members_.find(id);
  if (it == members_.end()) {
    throw Error(ErrorCode::UnknownMember, id);
  }
  return it->second;
}

void SystemGraph::check_schema(MemberKind kind, const AttributeVector& attrs) const {
  const FieldSet& fields = schema_.fields(kind);
  if (attrs.size() != fields.size()) {
    throw Error(ErrorCode::SchemaMismatch,
                "expected " + std::to_string(fields.size()) + " fields, got " +
                    std::to_string(attrs.size()));
  }
  for (const auto& [name, value] : attrs) {
    if (!fields.contains(name)) {
      throw Error(ErrorCode::SchemaMismatch, "field not in schema: " + name);
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::SchemaMismatch, "non-finite value for field: " + name);
    }
  }
}

void SystemGraph::add_member(const MemberId& id, MemberKind kind, const AttributeVector& attrs) {
  std::unique_lock lock(mutex_);
  if (id.empty()) {
    throw Error(ErrorCode::SchemaMismatch, "member id must be non-empty");
  }
  if (members_.contains(id)) {
    throw Error(ErrorCode::DuplicateId, id);
  }
  check_schema(kind, attrs);
  members_.emplace(id, MemberRecord{kind, attrs});
}

void SystemGraph::set_attributes(const MemberId& id, const AttributeVector& attrs) {
  std::unique_lock lock(mutex_);
  auto it = members_.find(id);
  if (it == members_.end()) {
    throw Error(ErrorCode::UnknownMember, id);
  }
  check_schema(it->second.kind, attrs);
  it->second.attrs = attrs;
}

bool SystemGraph::would_cycle(const MemberId& src, const MemberId& dst, int layer) const {
  // Tree layers have in-degree <= 1, so walking parents from src terminates.
  const auto& in = layers_[static_cast<std::size_t>(layer)].in;
  const MemberId* cursor = &src;
  while (true) {
    if (*cursor == dst) return true;
    auto it = in.find(*cursor);
    if (it == in.end() || it->second.empty()) return false;
    cursor = &*it->second.begin();
  }
}

void SystemGraph::add_edge(const MemberId& src, const MemberId& dst, int layer) {
  std::unique_lock lock(mutex_);
  if (layer < 0 || layer >= layer_count_) {
    throw Error(ErrorCode::LayerOutOfRange,
                "layer " + std::to_string(layer) + " of " + std::to_string(layer_count_));
  }
  const auto src_it = members_.find(src);
  const auto dst_it = members_.find(dst);
  if (src_it == members_.end()) throw Error(ErrorCode::UnknownMember, src);
  if (dst_it == members_.end()) throw Error(ErrorCode::UnknownMember, dst);
  if (src == dst) {
    throw Error(ErrorCode::KindViolation, "self loop rejected: " + src);
  }

  Adjacency& adj = layers_[static_cast<std::size_t>(layer)];
  if (adj.out[src].contains(dst)) {
    return;  // at most one edge per (src, dst, layer); re-insertion is a no-op
  }

  if (layer == 0) {
    if (!layer0_pair_allowed(src_it->second.kind, dst_it->second.kind)) {
      throw Error(ErrorCode::KindViolation, "passive->passive edge on layer 0: " + src + " -> " + dst);
    }
  } else {
    auto in_it = adj.in.find(dst);
    if (in_it != adj.in.end() && !in_it->second.empty()) {
      throw Error(ErrorCode::TreeViolation, dst + " already has a parent on layer " +
                                                std::to_string(layer));
    }
    if (would_cycle(src, dst, layer)) {
      throw Error(ErrorCode::TreeViolation, "edge " + src + " -> " + dst +
                                                " would close a cycle on layer " +
                                                std::to_string(layer));
    }
  }

  adj.out[src].insert(dst);
  adj.in[dst].insert(src);
}

bool SystemGraph::has_member(const MemberId& id) const {
  std::shared_lock lock(mutex_);
  return members_.contains(id);
}

bool SystemGraph::has_edge(const MemberId& src, const MemberId& dst, int layer) const {
  std::shared_lock lock(mutex_);
  if (layer < 0 || layer >= layer_count_) return false;
  const auto& out = layers_[static_cast<std::size_t>(layer)].out;
  auto it = out.find(src);
  return it != out.end() && it->second.contains(dst);
}

MemberKind SystemGraph::kind(const MemberId& id) const {
  std::shared_lock lock(mutex_);
  return record(id).kind;
}

AttributeVector SystemGraph::attributes(const MemberId& id) const {
  std::shared_lock lock(mutex_);
  return record(id).attrs;
}

std::set<MemberId> SystemGraph::member_ids() const {
  std::shared_lock lock(mutex_);
  std::set<MemberId> ids;
  for (const auto& [id, _] : members_) ids.insert(id);
  return ids;
}

std::set<MemberId> SystemGraph::member_ids(MemberKind kind) const {
  std::shared_lock lock(mutex_);
  std::set<MemberId> ids;
  for (const auto& [id, rec] : members_) {
    if (rec.kind == kind) ids.insert(id);
  }
  return ids;
}

std::size_t SystemGraph::member_count() const {
  std::shared_lock lock(mutex_);
  return members_.size();
}

std::size_t SystemGraph::member_count(MemberKind kind) const {
  std::shared_lock lock(mutex_);
  std::size_t n = 0;
  for (const auto& [_, rec] : members_) {
    if (rec.kind == kind) ++n;
  }
  return n;
}

std::size_t SystemGraph::edge_count() const {
  std::shared_lock lock(mutex_);
  std::size_t n = 0;
  for (const Adjacency& adj : layers_) {
    for (const auto& [_, dsts] : adj.out) n += dsts.size();
  }
  return n;
}

std::size_t SystemGraph::edge_count(int layer) const {
  std::shared_lock lock(mutex_);
  if (layer < 0 || layer >= layer_count_) {
    throw Error(ErrorCode::LayerOutOfRange, std::to_string(layer));
  }
  std::size_t n = 0;
  for (const auto& [_, dsts] : layers_[static_cast<std::size_t>(layer)].out) n += dsts.size();
  return n;
}

std::set<MemberId> SystemGraph::neighbors(const MemberId& id, Direction direction,
                                          KindFilter filter) const {
  std::shared_lock lock(mutex_);
  record(id);  // existence check
  const Adjacency& adj = layers_[0];
  const auto& table = direction == Direction::Predecessors ? adj.in : adj.out;
  std::set<MemberId> out;
  auto it = table.find(id);
  if (it == table.end()) return out;
  for (const MemberId& other : it->second) {
    const MemberKind k = members_.at(other).kind;
    if (filter == KindFilter::ActiveOnly && k != MemberKind::Active) continue;
    if (filter == KindFilter::PassiveOnly && k != MemberKind::Passive) continue;
    out.insert(other);
  }
  return out;
}

std::set<MemberId> SystemGraph::active_peers(const MemberId& id, Direction direction) const {
  std::shared_lock lock(mutex_);
  const MemberRecord& rec = record(id);
  if (rec.kind != MemberKind::Active) {
    throw Error(ErrorCode::NotActive, id);
  }
  const Adjacency& adj = layers_[0];
  const auto& first_hop = direction == Direction::Successors ? adj.out : adj.in;
  std::set<MemberId> peers;
  auto it = first_hop.find(id);
  if (it == first_hop.end()) return peers;
  for (const MemberId& mid : it->second) {
    const MemberKind k = members_.at(mid).kind;
    if (k == MemberKind::Active) {
      peers.insert(mid);  // direct send edge
      continue;
    }
    // Through a distributor: publish then subscribe (or the reverse).
    auto hop = first_hop.find(mid);
    if (hop == first_hop.end()) continue;
    for (const MemberId& peer : hop->second) {
      if (members_.at(peer).kind == MemberKind::Active) peers.insert(peer);
    }
  }
  return peers;
}

CommSubgraph SystemGraph::comm_subgraph() const {
  std::shared_lock lock(mutex_);
  CommSubgraph view;
  for (const auto& [src, dsts] : layers_[0].out) {
    for (const MemberId& dst : dsts) {
      view.edges.push_back(Edge{src, dst, 0});
      view.members.insert(src);
      view.members.insert(dst);
    }
  }
  return view;
}

std::set<MemberId> SystemGraph::roots_of_layer(int layer) const {
  const Adjacency& adj = layers_[static_cast<std::size_t>(layer)];
  std::set<MemberId> incident;
  for (const auto& [src, dsts] : adj.out) {
    if (!dsts.empty()) incident.insert(src);
    for (const MemberId& dst : dsts) incident.insert(dst);
  }
  std::set<MemberId> roots;
  for (const MemberId& id : incident) {
    auto it = adj.in.find(id);
    if (it == adj.in.end() || it->second.empty()) roots.insert(id);
  }
  return roots;
}

TreeView SystemGraph::tree_subgraph(int layer) const {
  std::shared_lock lock(mutex_);
  if (layer < 1 || layer >= layer_count_) {
    throw Error(ErrorCode::LayerOutOfRange,
                "tree layers are 1.." + std::to_string(layer_count_ - 1) + ", got " +
                    std::to_string(layer));
  }
  const std::set<MemberId> roots = roots_of_layer(layer);
  if (roots.size() != 1) {
    throw Error(ErrorCode::MultipleRoots, "layer " + std::to_string(layer) + " has " +
                                              std::to_string(roots.size()) +
                                              " roots, expected exactly one");
  }
  TreeView view;
  view.layer = layer;
  view.root = *roots.begin();
  const Adjacency& adj = layers_[static_cast<std::size_t>(layer)];
  for (const auto& [src, dsts] : adj.out) {
    for (const MemberId& dst : dsts) {
      view.members.insert(src);
      view.members.insert(dst);
      view.parent[dst] = src;
      view.children[src].push_back(dst);  // std::set iteration keeps these sorted
    }
  }
  return view;
}

std::vector<Edge> SystemGraph::edges() const {
  std::shared_lock lock(mutex_);
  std::vector<Edge> out;
  for (int layer = 0; layer < layer_count_; ++layer) {
    for (const auto& [src, dsts] : layers_[static_cast<std::size_t>(layer)].out) {
      for (const MemberId& dst : dsts) out.push_back(Edge{src, dst, layer});
    }
  }
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.layer, a.src, a.dst) < std::tie(b.layer, b.src, b.dst);
  });
  return out;
}

std::vector<Edge> SystemGraph::edges(int layer) const {
  std::shared_lock lock(mutex_);
  if (layer < 0 || layer >= layer_count_) {
    throw Error(ErrorCode::LayerOutOfRange, std::to_string(layer));
  }
  std::vector<Edge> out;
  for (const auto& [src, dsts] : layers_[static_cast<std::size_t>(layer)].out) {
    for (const MemberId& dst : dsts) out.push_back(Edge{src, dst, layer});
  }
  return out;  // map/set iteration is already (src, dst) sorted
}

void SystemGraph::validate() const {
  std::shared_lock lock(mutex_);
  for (const auto& [id, rec] : members_) {
    check_schema(rec.kind, rec.attrs);
    if (id.empty()) throw Error(ErrorCode::SchemaMismatch, "empty member id");
  }
  for (int layer = 0; layer < layer_count_; ++layer) {
    const Adjacency& adj = layers_[static_cast<std::size_t>(layer)];
    for (const auto& [src, dsts] : adj.out) {
      if (!members_.contains(src)) throw Error(ErrorCode::UnknownMember, src);
      for (const MemberId& dst : dsts) {
        if (!members_.contains(dst)) throw Error(ErrorCode::UnknownMember, dst);
        if (src == dst) throw Error(ErrorCode::KindViolation, "self loop: " + src);
        if (layer == 0 &&
            !layer0_pair_allowed(members_.at(src).kind, members_.at(dst).kind)) {
          throw Error(ErrorCode::KindViolation, "layer-0 typing: " + src + " -> " + dst);
        }
      }
    }
    if (layer >= 1) {
      for (const auto& [dst, srcs] : adj.in) {
        if (srcs.size() > 1) {
          throw Error(ErrorCode::TreeViolation, dst + " has in-degree > 1 on layer " +
                                                    std::to_string(layer));
        }
      }
      // Walking parent chains visits each member once; a revisit is a cycle.
      std::set<MemberId> done;
      for (const auto& [start, _] : adj.in) {
        std::set<MemberId> path;
        const MemberId* cursor = &start;
        while (!done.contains(*cursor)) {
          if (!path.insert(*cursor).second) {
            throw Error(ErrorCode::TreeViolation,
                        "cycle on layer " + std::to_string(layer) + " through " + *cursor);
          }
          auto it = adj.in.find(*cursor);
          if (it == adj.in.end() || it->second.empty()) break;
          cursor = &*it->second.begin();
        }
        done.insert(path.begin(), path.end());
      }
    }
  }
}

}  // namespace shadowtrace
