#include "tgfd/temporal_graph.hpp"

#include <algorithm>
#include <deque>

#include "tgfd/error.hpp"

namespace tgfd {

VertexIndex GraphContext::resolve(const std::string& id) const {
  auto it = index.find(id);
  if (it == index.end()) throw UnknownVertex(id);
  return it->second;
}

Snapshot::Snapshot(std::shared_ptr<const GraphContext> ctx, Timestamp t) : ctx_(std::move(ctx)), t_(t) {
  std::size_t n = ctx_->vertex_count();
  present_.assign(n, true);
  out_.resize(n);
  in_.resize(n);
  attrs_.resize(n);
}

std::size_t Snapshot::present_count() const {
  return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), true));
}

const std::string* Snapshot::attr(VertexIndex v, Symbol name) const {
  const auto& m = attrs_[v];
  auto it = m.find(name);
  return it == m.end() ? nullptr : &it->second;
}

bool Snapshot::insert_edge(const Edge& e) {
  if (!edges_.insert(e).second) return false;
  auto& o = out_[e.src];
  Neighbor no{e.label, e.dst};
  o.insert(std::lower_bound(o.begin(), o.end(), no), no);
  auto& i = in_[e.dst];
  Neighbor ni{e.label, e.src};
  i.insert(std::lower_bound(i.begin(), i.end(), ni), ni);
  return true;
}

bool Snapshot::erase_edge(const Edge& e) {
  if (edges_.erase(e) == 0) return false;
  auto& o = out_[e.src];
  o.erase(std::lower_bound(o.begin(), o.end(), Neighbor{e.label, e.dst}));
  auto& i = in_[e.dst];
  i.erase(std::lower_bound(i.begin(), i.end(), Neighbor{e.label, e.src}));
  return true;
}

void Snapshot::set_attr(VertexIndex v, Symbol name, std::string value) { attrs_[v][name] = std::move(value); }

bool Snapshot::erase_attr(VertexIndex v, Symbol name) { return attrs_[v].erase(name) != 0; }

void Snapshot::apply(const GraphDelta& d) {
  switch (d.kind) {
    case GraphDelta::Kind::kEdgeInsert:
      insert_edge(d.edge());
      break;
    case GraphDelta::Kind::kEdgeDelete:
      if (!erase_edge(d.edge())) throw DeleteMissingEdge(describe(d.edge()));
      break;
    case GraphDelta::Kind::kAttrSet:
      set_attr(d.vertex, d.symbol, d.value);
      break;
    case GraphDelta::Kind::kAttrDelete:
      erase_attr(d.vertex, d.symbol);
      break;
  }
}

Snapshot Snapshot::restricted(const std::vector<bool>& keep) const {
  Snapshot r(ctx_, t_);
  for (std::size_t v = 0; v < present_.size(); ++v) {
    r.present_[v] = present_[v] && keep[v];
    if (r.present_[v]) r.attrs_[v] = attrs_[v];
  }
  for (const Edge& e : edges_) {
    if (r.present_[e.src] && r.present_[e.dst]) r.insert_edge(e);
  }
  return r;
}

std::string Snapshot::describe(const Edge& e) const {
  return "(" + vertex_id(e.src) + ", " + symbols().name(e.label) + ", " + vertex_id(e.dst) + ")";
}

bool operator==(const Snapshot& a, const Snapshot& b) {
  return a.present_ == b.present_ && a.edges_ == b.edges_ && a.attrs_ == b.attrs_;
}

TemporalGraph::TemporalGraph(const GraphData& base) : ctx_(std::make_shared<GraphContext>()) {
  for (const auto& v : base.vertices) {
    if (ctx_->index.count(v.id)) throw ParseError(0, "duplicate vertex '" + v.id + "'");
    VertexIndex idx = static_cast<VertexIndex>(ctx_->ids.size());
    ctx_->ids.push_back(v.id);
    Symbol type = ctx_->symbols.intern(v.type);
    ctx_->types.push_back(type);
    ctx_->index.emplace(v.id, idx);
    ctx_->by_type[type].push_back(idx);
  }
  // Intern attribute names and edge labels before the context is shared.
  for (const auto& v : base.vertices)
    for (const auto& [name, value] : v.attrs) ctx_->symbols.intern(name);
  for (const auto& e : base.edges) ctx_->symbols.intern(e.label);

  Snapshot s(ctx_, 1);
  for (const auto& v : base.vertices) {
    VertexIndex idx = ctx_->index.at(v.id);
    for (const auto& [name, value] : v.attrs) s.set_attr(idx, ctx_->symbols.find(name), value);
  }
  for (const auto& e : base.edges) {
    s.insert_edge({ctx_->resolve(e.src), ctx_->symbols.find(e.label), ctx_->resolve(e.dst)});
  }
  snapshots_.push_back(std::move(s));
  deltas_.emplace_back();
}

GraphDelta TemporalGraph::resolve(const Change& c) {
  return std::visit(
      [&](const auto& ch) -> GraphDelta {
        using T = std::decay_t<decltype(ch)>;
        if constexpr (std::is_same_v<T, EdgeInsert>) {
          return GraphDelta::insert({ctx_->resolve(ch.src), ctx_->symbols.intern(ch.label), ctx_->resolve(ch.dst)});
        } else if constexpr (std::is_same_v<T, EdgeDelete>) {
          return GraphDelta::erase({ctx_->resolve(ch.src), ctx_->symbols.intern(ch.label), ctx_->resolve(ch.dst)});
        } else if constexpr (std::is_same_v<T, AttrSet>) {
          return GraphDelta::set_attr(ctx_->resolve(ch.vertex), ctx_->symbols.intern(ch.name), ch.value);
        } else {
          return GraphDelta::erase_attr(ctx_->resolve(ch.vertex), ctx_->symbols.intern(ch.name));
        }
      },
      c);
}

void TemporalGraph::apply_changes(const ChangeSet& cs) {
  if (cs.t < 2 || cs.t > T() + 1) {
    throw Error("change set for t=" + std::to_string(cs.t) + " does not follow snapshot " + std::to_string(T()));
  }
  Snapshot next = snapshots_[static_cast<std::size_t>(cs.t - 2)];
  next.set_t(cs.t);
  std::vector<GraphDelta> applied;
  for (const Change& c : cs.changes) {
    GraphDelta d = resolve(c);
    // Skip no-ops so downstream consumers only see real changes.
    bool real = true;
    switch (d.kind) {
      case GraphDelta::Kind::kEdgeInsert:
        real = !next.has_edge(d.edge());
        break;
      case GraphDelta::Kind::kAttrSet: {
        const std::string* cur = next.attr(d.vertex, d.symbol);
        real = !cur || *cur != d.value;
        break;
      }
      case GraphDelta::Kind::kAttrDelete:
        real = next.attr(d.vertex, d.symbol) != nullptr;
        break;
      case GraphDelta::Kind::kEdgeDelete:
        break;
    }
    next.apply(d);
    if (real) applied.push_back(std::move(d));
  }
  auto keep = static_cast<std::size_t>(cs.t - 1);
  snapshots_.resize(keep);
  deltas_.resize(keep);
  change_sets_.resize(keep - 1);
  snapshots_.push_back(std::move(next));
  deltas_.push_back(std::move(applied));
  change_sets_.push_back(cs);
}

GraphData TemporalGraph::export_snapshot(Timestamp t) const {
  const Snapshot& s = snapshot(t);
  GraphData out;
  for (VertexIndex v = 0; v < vertex_count(); ++v) {
    VertexRecord r{ctx_->ids[v], symbols().name(ctx_->types[v]), {}};
    for (const auto& [name, value] : s.attrs(v)) r.attrs.emplace_back(symbols().name(name), value);
    out.vertices.push_back(std::move(r));
  }
  for (const Edge& e : s.edges()) out.edges.push_back({ctx_->ids[e.src], symbols().name(e.label), ctx_->ids[e.dst]});
  return out;
}

TemporalGraph apply_changes(TemporalGraph graph, const ChangeSet& cs) {
  graph.apply_changes(cs);
  return graph;
}

std::vector<VertexIndex> ball(const Snapshot& s, VertexIndex center, int d) {
  std::vector<VertexIndex> result;
  if (!s.present(center)) return result;
  std::unordered_map<VertexIndex, int> dist{{center, 0}};
  std::deque<VertexIndex> queue{center};
  while (!queue.empty()) {
    VertexIndex v = queue.front();
    queue.pop_front();
    result.push_back(v);
    int dv = dist[v];
    if (dv == d) continue;
    auto visit = [&](VertexIndex w) {
      if (s.present(w) && dist.emplace(w, dv + 1).second) queue.push_back(w);
    };
    for (const Neighbor& n : s.out(v)) visit(n.v);
    for (const Neighbor& n : s.in(v)) visit(n.v);
  }
  std::sort(result.begin(), result.end());
  return result;
}

Snapshot induced_subgraph(const TemporalGraph& g, Timestamp t, VertexIndex center, int d) {
  const Snapshot& s = g.snapshot(t);
  std::vector<bool> keep(s.vertex_count(), false);
  for (VertexIndex v : ball(s, center, d)) keep[v] = true;
  return s.restricted(keep);
}

Snapshot fragment_view(const TemporalGraph& g, const Fragment& f, Timestamp t) {
  const Snapshot& s = g.snapshot(t);
  std::vector<bool> keep(s.vertex_count(), false);
  for (VertexIndex v : f.owned) keep[v] = true;
  for (const Edge& e : f.borrowed) {
    if (s.has_edge(e)) keep[e.src] = keep[e.dst] = true;
  }
  Snapshot view = s.restricted(keep);
  // Edges between two borrowed endpoints are only present if listed.
  for (const Edge& e : s.edges()) {
    if (!view.has_edge(e)) continue;
    bool owned_induced = f.owned.count(e.src) && f.owned.count(e.dst);
    if (!owned_induced && !f.borrowed.count(e)) view.erase_edge(e);
  }
  return view;
}

}  // namespace tgfd
