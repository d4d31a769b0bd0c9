#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tgfd/symbols.hpp"

namespace tgfd {

using VertexIndex = std::uint32_t;
using Timestamp = int;

struct Edge {
  VertexIndex src = 0;
  Symbol label = 0;
  VertexIndex dst = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Symbol label = 0;
  VertexIndex v = 0;
  friend auto operator<=>(const Neighbor&, const Neighbor&) = default;
};

// String-level records, as they appear in files.
struct VertexRecord {
  std::string id;
  std::string type;
  std::vector<std::pair<std::string, std::string>> attrs;
};

struct EdgeRecord {
  std::string src;
  std::string label;
  std::string dst;
  friend auto operator<=>(const EdgeRecord&, const EdgeRecord&) = default;
};

struct GraphData {
  std::vector<VertexRecord> vertices;
  std::vector<EdgeRecord> edges;
};

struct EdgeInsert {
  std::string src, label, dst;
};
struct EdgeDelete {
  std::string src, label, dst;
};
struct AttrSet {
  std::string vertex, name, value;
};
struct AttrDelete {
  std::string vertex, name;
};

using Change = std::variant<EdgeInsert, EdgeDelete, AttrSet, AttrDelete>;

struct ChangeSet {
  Timestamp t = 0;
  std::vector<Change> changes;
};

// A change resolved against a graph's vertex table and symbols.
struct GraphDelta {
  enum class Kind { kEdgeInsert, kEdgeDelete, kAttrSet, kAttrDelete };
  Kind kind = Kind::kEdgeInsert;
  VertexIndex vertex = 0;  // edge source, or the attributed vertex
  Symbol symbol = 0;       // edge label, or attribute name
  VertexIndex other = 0;   // edge destination
  std::string value;

  bool is_edge() const { return kind == Kind::kEdgeInsert || kind == Kind::kEdgeDelete; }
  Edge edge() const { return {vertex, symbol, other}; }

  static GraphDelta insert(Edge e) { return {Kind::kEdgeInsert, e.src, e.label, e.dst, {}}; }
  static GraphDelta erase(Edge e) { return {Kind::kEdgeDelete, e.src, e.label, e.dst, {}}; }
  static GraphDelta set_attr(VertexIndex v, Symbol a, std::string value) {
    return {Kind::kAttrSet, v, a, 0, std::move(value)};
  }
  static GraphDelta erase_attr(VertexIndex v, Symbol a) { return {Kind::kAttrDelete, v, a, 0, {}}; }
};

// Vertex set and symbols shared by every snapshot of one temporal graph.
struct GraphContext {
  SymbolTable symbols;
  std::vector<std::string> ids;
  std::vector<Symbol> types;
  std::unordered_map<std::string, VertexIndex> index;
  std::map<Symbol, std::vector<VertexIndex>> by_type;

  VertexIndex resolve(const std::string& id) const;
  std::size_t vertex_count() const { return ids.size(); }
};

using AttrMap = std::map<Symbol, std::string>;

class Snapshot {
 public:
  Snapshot() = default;
  Snapshot(std::shared_ptr<const GraphContext> ctx, Timestamp t);

  Timestamp t() const { return t_; }
  void set_t(Timestamp t) { t_ = t; }

  const GraphContext& context() const { return *ctx_; }
  std::shared_ptr<const GraphContext> context_ptr() const { return ctx_; }
  const SymbolTable& symbols() const { return ctx_->symbols; }
  std::size_t vertex_count() const { return ctx_->vertex_count(); }
  const std::string& vertex_id(VertexIndex v) const { return ctx_->ids[v]; }
  Symbol type(VertexIndex v) const { return ctx_->types[v]; }

  bool present(VertexIndex v) const { return present_[v]; }
  std::size_t present_count() const;

  const std::set<Edge>& edges() const { return edges_; }
  bool has_edge(const Edge& e) const { return edges_.count(e) != 0; }
  std::span<const Neighbor> out(VertexIndex v) const { return out_[v]; }
  std::span<const Neighbor> in(VertexIndex v) const { return in_[v]; }

  const AttrMap& attrs(VertexIndex v) const { return attrs_[v]; }
  const std::string* attr(VertexIndex v, Symbol name) const;

  // Return false when the operation was a no-op.
  bool insert_edge(const Edge& e);
  bool erase_edge(const Edge& e);
  void set_attr(VertexIndex v, Symbol name, std::string value);
  bool erase_attr(VertexIndex v, Symbol name);

  // Throws DeleteMissingEdge for a delete of an absent edge.
  void apply(const GraphDelta& d);

  // Keeps vertices with keep[v]; drops every edge touching a dropped vertex
  // and clears dropped vertices' attributes.
  Snapshot restricted(const std::vector<bool>& keep) const;

  std::string describe(const Edge& e) const;

  friend bool operator==(const Snapshot& a, const Snapshot& b);

 private:
  std::shared_ptr<const GraphContext> ctx_;
  Timestamp t_ = 0;
  std::vector<bool> present_;
  std::set<Edge> edges_;
  std::vector<std::vector<Neighbor>> out_;
  std::vector<std::vector<Neighbor>> in_;
  std::vector<AttrMap> attrs_;
};

class TemporalGraph {
 public:
  explicit TemporalGraph(const GraphData& base);

  Timestamp T() const { return static_cast<Timestamp>(snapshots_.size()); }
  const Snapshot& snapshot(Timestamp t) const { return snapshots_.at(static_cast<std::size_t>(t - 1)); }
  const GraphContext& context() const { return *ctx_; }
  std::shared_ptr<const GraphContext> context_ptr() const { return ctx_; }
  const SymbolTable& symbols() const { return ctx_->symbols; }
  std::size_t vertex_count() const { return ctx_->vertex_count(); }

  // Requires 2 <= cs.t <= T()+1. Snapshots at cs.t and later are replaced.
  void apply_changes(const ChangeSet& cs);

  // Resolved deltas that turned snapshot t-1 into snapshot t (no-ops removed).
  const std::vector<GraphDelta>& deltas(Timestamp t) const { return deltas_.at(static_cast<std::size_t>(t - 1)); }
  const std::vector<ChangeSet>& change_sets() const { return change_sets_; }

  GraphDelta resolve(const Change& c);
  GraphData export_snapshot(Timestamp t) const;

 private:
  std::shared_ptr<GraphContext> ctx_;
  std::vector<Snapshot> snapshots_;
  std::vector<std::vector<GraphDelta>> deltas_;
  std::vector<ChangeSet> change_sets_;
};

TemporalGraph apply_changes(TemporalGraph graph, const ChangeSet& cs);

// Vertices within d undirected hops of center, center included.
std::vector<VertexIndex> ball(const Snapshot& s, VertexIndex center, int d);

// Vertices within d hops of center, with all edges among them and their attributes.
Snapshot induced_subgraph(const TemporalGraph& g, Timestamp t, VertexIndex center, int d);

struct Fragment {
  int worker_id = 0;
  std::set<VertexIndex> owned;
  std::set<Edge> borrowed;
};

// Owned vertices with their induced edges plus the borrowed edges (and
// their endpoints).
Snapshot fragment_view(const TemporalGraph& g, const Fragment& f, Timestamp t);

}  // namespace tgfd
