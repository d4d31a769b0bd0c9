#include "tgfd/matcher.hpp"

#include <algorithm>

#include "tgfd/error.hpp"

namespace tgfd {

CompiledPattern compile(const GraphPattern& q, const SymbolTable& symbols) {
  CompiledPattern c;
  for (const auto& n : q.nodes()) {
    if (n.label == kWildcard) {
      c.types.push_back(kNoSymbol);
    } else {
      Symbol t = symbols.find(n.label);
      if (t == kNoSymbol) c.impossible = true;
      c.types.push_back(t);
    }
  }
  c.incident.resize(q.size());
  for (const auto& e : q.edges()) {
    Symbol l = symbols.find(e.label);
    if (l == kNoSymbol) c.impossible = true;
    c.incident[static_cast<std::size_t>(e.src)].push_back(static_cast<int>(c.edges.size()));
    if (e.dst != e.src) c.incident[static_cast<std::size_t>(e.dst)].push_back(static_cast<int>(c.edges.size()));
    c.edges.push_back({e.src, l, e.dst});
  }
  return c;
}

namespace {

struct Step {
  int var = 0;
  int pivot_edge = -1;        // edge linking var to an earlier node
  std::vector<int> checks;    // other edges between var and earlier nodes
};

std::vector<Step> plan(const CompiledPattern& cq, std::vector<bool> bound) {
  std::vector<Step> steps;
  std::size_t n = cq.size();
  while (true) {
    int best = -1, best_links = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (bound[v]) continue;
      int links = 0;
      for (int ei : cq.incident[v]) {
        const auto& e = cq.edges[static_cast<std::size_t>(ei)];
        int other = e.src == static_cast<int>(v) ? e.dst : e.src;
        if (bound[static_cast<std::size_t>(other)]) ++links;
      }
      if (links > best_links) best = static_cast<int>(v), best_links = links;
    }
    if (best < 0) break;
    Step st;
    st.var = best;
    for (int ei : cq.incident[static_cast<std::size_t>(best)]) {
      const auto& e = cq.edges[static_cast<std::size_t>(ei)];
      int other = e.src == best ? e.dst : e.src;
      if (!bound[static_cast<std::size_t>(other)]) continue;
      if (st.pivot_edge < 0)
        st.pivot_edge = ei;
      else
        st.checks.push_back(ei);
    }
    bound[static_cast<std::size_t>(best)] = true;
    steps.push_back(std::move(st));
  }
  return steps;
}

class Search {
 public:
  Search(const CompiledPattern& cq, const Snapshot& s, const AnchorFilter* anchor,
         const std::function<void(const Binding&)>& emit)
      : cq_(cq), s_(s), anchor_(anchor), emit_(emit) {}

  void run(Binding b, const std::vector<Step>& steps) {
    b_ = std::move(b);
    steps_ = &steps;
    dfs(0);
  }

  bool edge_ok(int ei) const {
    const auto& e = cq_.edges[static_cast<std::size_t>(ei)];
    return s_.has_edge({b_[static_cast<std::size_t>(e.src)], e.label, b_[static_cast<std::size_t>(e.dst)]});
  }

 private:
  bool used(VertexIndex v) const { return std::find(b_.begin(), b_.end(), v) != b_.end(); }

  void dfs(std::size_t i) {
    if (i == steps_->size()) {
      if (!anchor_ || anchor_->accepts(b_)) emit_(b_);
      return;
    }
    const Step& st = (*steps_)[i];
    const auto& pe = cq_.edges[static_cast<std::size_t>(st.pivot_edge)];
    bool var_is_dst = pe.dst == st.var;
    VertexIndex w = b_[static_cast<std::size_t>(var_is_dst ? pe.src : pe.dst)];
    auto adj = var_is_dst ? s_.out(w) : s_.in(w);
    auto lo = std::lower_bound(adj.begin(), adj.end(), Neighbor{pe.label, 0});
    for (auto it = lo; it != adj.end() && it->label == pe.label; ++it) {
      VertexIndex v = it->v;
      if (!s_.present(v) || !cq_.type_ok(st.var, s_, v) || used(v)) continue;
      if (anchor_ && anchor_->var == st.var && !anchor_->allowed[v]) continue;
      b_[static_cast<std::size_t>(st.var)] = v;
      bool ok = std::all_of(st.checks.begin(), st.checks.end(), [&](int ei) { return edge_ok(ei); });
      if (ok) dfs(i + 1);
      b_[static_cast<std::size_t>(st.var)] = kUnbound;
    }
  }

  const CompiledPattern& cq_;
  const Snapshot& s_;
  const AnchorFilter* anchor_;
  const std::function<void(const Binding&)>& emit_;
  Binding b_;
  const std::vector<Step>* steps_ = nullptr;
};

std::vector<VertexIndex> candidates(const CompiledPattern& cq, const Snapshot& s, int var) {
  std::vector<VertexIndex> out;
  Symbol t = cq.types[static_cast<std::size_t>(var)];
  if (t == kNoSymbol) {
    for (VertexIndex v = 0; v < s.vertex_count(); ++v)
      if (s.present(v)) out.push_back(v);
    return out;
  }
  auto it = s.context().by_type.find(t);
  if (it == s.context().by_type.end()) return out;
  for (VertexIndex v : it->second)
    if (s.present(v)) out.push_back(v);
  return out;
}

}  // namespace

void extend_matches(const CompiledPattern& cq, const Snapshot& s, Binding partial, const AnchorFilter* anchor,
                    const std::function<void(const Binding&)>& emit) {
  if (cq.impossible || cq.size() == 0) return;
  std::vector<bool> bound(cq.size(), false);
  bool any = false;
  for (std::size_t v = 0; v < cq.size(); ++v) {
    if (partial[v] == kUnbound) continue;
    VertexIndex x = partial[v];
    if (!s.present(x) || !cq.type_ok(static_cast<int>(v), s, x)) return;
    if (anchor && anchor->var == static_cast<int>(v) && !anchor->allowed[x]) return;
    for (std::size_t u = 0; u < v; ++u)
      if (partial[u] == x) return;
    bound[v] = any = true;
  }
  Search search(cq, s, anchor, emit);
  if (any) {
    for (const auto& e : cq.edges) {
      VertexIndex a = partial[static_cast<std::size_t>(e.src)], b = partial[static_cast<std::size_t>(e.dst)];
      if (a != kUnbound && b != kUnbound && !s.has_edge({a, e.label, b})) return;
    }
    auto steps = plan(cq, bound);
    search.run(std::move(partial), steps);
    return;
  }
  // Root at the node with the fewest candidates.
  int root = 0;
  std::vector<VertexIndex> root_cands = candidates(cq, s, 0);
  for (int v = 1; v < static_cast<int>(cq.size()); ++v) {
    auto c = candidates(cq, s, v);
    if (c.size() < root_cands.size()) root = v, root_cands = std::move(c);
  }
  bound[static_cast<std::size_t>(root)] = true;
  auto steps = plan(cq, bound);
  for (VertexIndex v : root_cands) {
    if (anchor && anchor->var == root && !anchor->allowed[v]) continue;
    Binding b(cq.size(), kUnbound);
    b[static_cast<std::size_t>(root)] = v;
    search.run(std::move(b), steps);
  }
}

std::vector<Binding> match_snapshot(const GraphPattern& q, const Snapshot& s, const AnchorFilter* anchor) {
  CompiledPattern cq = compile(q, s.symbols());
  std::vector<Binding> out;
  extend_matches(cq, s, Binding(q.size(), kUnbound), anchor, [&](const Binding& b) { out.push_back(b); });
  std::sort(out.begin(), out.end());
  return out;
}

bool PathPattern::has_var(int v) const { return std::find(vars.begin(), vars.end(), v) != vars.end(); }

std::vector<PathPattern> decompose(const GraphPattern& q, const std::vector<ConstantLiteral>& constants) {
  std::vector<PathPattern> paths;
  const auto& edges = q.edges();
  for (const auto& e : edges) {
    if (e.src == e.dst) throw SyntaxError(0, "self-loop pattern edges are not supported");
  }
  std::vector<bool> covered(edges.size(), false);
  if (edges.empty() && q.size() > 0) {
    PathPattern p;
    p.vars = {0};
    paths.push_back(p);
  }
  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (covered[start]) continue;
    PathPattern p;
    p.vars = {edges[start].src, edges[start].dst};
    p.edges = {static_cast<int>(start)};
    // Extension prefers uncovered edges; any edge keeps the path growing so
    // the result is maximal.
    auto pick = [&](bool forward) {
      int best = -1;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        int from = forward ? edges[i].src : edges[i].dst;
        int to = forward ? edges[i].dst : edges[i].src;
        if (from != (forward ? p.vars.back() : p.vars.front()) || p.has_var(to)) continue;
        if (best < 0 || (!covered[i] && covered[static_cast<std::size_t>(best)])) best = static_cast<int>(i);
      }
      return best;
    };
    for (int i; (i = pick(true)) >= 0;) {
      p.vars.push_back(edges[static_cast<std::size_t>(i)].dst);
      p.edges.push_back(i);
    }
    for (int i; (i = pick(false)) >= 0;) {
      p.vars.insert(p.vars.begin(), edges[static_cast<std::size_t>(i)].src);
      p.edges.insert(p.edges.begin(), i);
    }
    for (int i : p.edges) covered[static_cast<std::size_t>(i)] = true;
    paths.push_back(std::move(p));
  }
  for (auto& p : paths) {
    int m = static_cast<int>(p.vars.size()) - 1;
    p.center = m / 2;
    p.radius = std::max(p.center, m - p.center);
    for (const auto& c : constants) {
      int v = q.var_index(c.ref.var);
      if (v >= 0 && p.has_var(v)) p.literals.push_back(c);
    }
  }
  return paths;
}

bool PartialMatchState::complete() const { return std::all_of(beta.begin(), beta.end(), [](bool b) { return b; }); }

IncrementalMatcher::IncrementalMatcher(GraphPattern q, std::vector<ConstantLiteral> gating, AnchorFilter anchor)
    : q_(std::move(q)), gating_(std::move(gating)), anchor_(std::move(anchor)) {
  paths_ = decompose(q_, gating_);
}

void IncrementalMatcher::initialize(const Snapshot& view) {
  cq_ = compile(q_, view.symbols());
  gating_attrs_.clear();
  for (const auto& g : gating_) gating_attrs_.push_back(view.symbols().find(g.ref.attr));
  states_.clear();
  by_vertex_.assign(view.vertex_count(), {});
  MatchDelta ignored;
  const AnchorFilter* af = anchor_.var >= 0 ? &anchor_ : nullptr;
  extend_matches(cq_, view, Binding(q_.size(), kUnbound), af,
                 [&](const Binding& b) { add_topological(b, view, ignored); });
}

void IncrementalMatcher::refresh_path(PartialMatchState& s, std::size_t k, const Snapshot& view) const {
  s.unsat[k].clear();
  for (const auto& lit : paths_[k].literals) {
    int v = q_.var_index(lit.ref.var);
    Symbol a = view.symbols().find(lit.ref.attr);
    const std::string* val = a == kNoSymbol ? nullptr : view.attr(s.candidate[static_cast<std::size_t>(v)], a);
    if (!val || *val != lit.value) s.unsat[k].push_back(lit);
  }
  s.beta[k] = s.unsat[k].empty();
}

void IncrementalMatcher::index_state(const Binding& b) {
  for (VertexIndex v : b) by_vertex_[v].insert(b);
}

void IncrementalMatcher::drop_state(const Binding& b) {
  for (VertexIndex v : b) by_vertex_[v].erase(b);
  states_.erase(b);
}

void IncrementalMatcher::add_topological(const Binding& b, const Snapshot& view, MatchDelta& delta) {
  auto it = states_.find(b);
  bool was_complete = false;
  if (it == states_.end()) {
    PartialMatchState s;
    s.candidate = b;
    s.beta.assign(paths_.size(), false);
    s.unsat.assign(paths_.size(), {});
    it = states_.emplace(b, std::move(s)).first;
    index_state(b);
  } else {
    was_complete = it->second.complete();
  }
  for (std::size_t k = 0; k < paths_.size(); ++k) refresh_path(it->second, k, view);
  if (!was_complete && it->second.complete()) delta.added.push_back(b);
}

bool IncrementalMatcher::path_present(const PartialMatchState& s, std::size_t k, const Snapshot& view) const {
  for (int ei : paths_[k].edges) {
    const auto& e = cq_.edges[static_cast<std::size_t>(ei)];
    if (!view.has_edge({s.candidate[static_cast<std::size_t>(e.src)], e.label,
                        s.candidate[static_cast<std::size_t>(e.dst)]}))
      return false;
  }
  return true;
}

MatchDelta IncrementalMatcher::apply(const GraphDelta& d, const Snapshot& view) {
  MatchDelta delta;
  if (cq_.impossible) return delta;
  switch (d.kind) {
    case GraphDelta::Kind::kAttrSet:
    case GraphDelta::Kind::kAttrDelete: {
      if (std::find(gating_attrs_.begin(), gating_attrs_.end(), d.symbol) == gating_attrs_.end()) break;
      std::vector<Binding> touched(by_vertex_[d.vertex].begin(), by_vertex_[d.vertex].end());
      for (const Binding& b : touched) {
        auto& s = states_.at(b);
        bool was = s.complete();
        for (std::size_t k = 0; k < paths_.size(); ++k) {
          if (s.topological(k)) refresh_path(s, k, view);
        }
        bool now = s.complete();
        if (was && !now) delta.removed.push_back(b);
        if (!was && now) delta.added.push_back(b);
      }
      break;
    }
    case GraphDelta::Kind::kEdgeDelete: {
      Edge e = d.edge();
      std::vector<Binding> touched(by_vertex_[e.src].begin(), by_vertex_[e.src].end());
      for (const Binding& b : touched) {
        auto& s = states_.at(b);
        bool was = s.complete();
        bool any_topo = false;
        for (std::size_t k = 0; k < paths_.size(); ++k) {
          for (int ei : paths_[k].edges) {
            const auto& pe = cq_.edges[static_cast<std::size_t>(ei)];
            if (pe.label == e.label && b[static_cast<std::size_t>(pe.src)] == e.src &&
                b[static_cast<std::size_t>(pe.dst)] == e.dst) {
              s.beta[k] = false;
              s.unsat[k].clear();
              break;
            }
          }
          any_topo = any_topo || s.topological(k);
        }
        if (was && !s.complete()) delta.removed.push_back(b);
        if (!any_topo) drop_state(b);
      }
      break;
    }
    case GraphDelta::Kind::kEdgeInsert: {
      Edge e = d.edge();
      // Partial states whose missing paths came back.
      std::set<Binding> near(by_vertex_[e.src].begin(), by_vertex_[e.src].end());
      near.insert(by_vertex_[e.dst].begin(), by_vertex_[e.dst].end());
      for (const Binding& b : near) {
        auto& s = states_.at(b);
        bool was = s.complete();
        for (std::size_t k = 0; k < paths_.size(); ++k) {
          if (!s.topological(k) && path_present(s, k, view)) refresh_path(s, k, view);
        }
        if (!was && s.complete()) delta.added.push_back(b);
      }
      bool relevant = false;
      const AnchorFilter* af = anchor_.var >= 0 ? &anchor_ : nullptr;
      for (const auto& pe : cq_.edges) {
        if (pe.label != e.label || !cq_.type_ok(pe.src, view, e.src) || !cq_.type_ok(pe.dst, view, e.dst)) continue;
        relevant = true;
        Binding seed(q_.size(), kUnbound);
        seed[static_cast<std::size_t>(pe.src)] = e.src;
        seed[static_cast<std::size_t>(pe.dst)] = e.dst;
        extend_matches(cq_, view, seed, af, [&](const Binding& b) {
          auto it = states_.find(b);
          if (it != states_.end()) {
            // Already known with every path intact.
            bool all_topo = true;
            for (std::size_t k = 0; k < paths_.size(); ++k) all_topo = all_topo && it->second.topological(k);
            if (all_topo) return;
          }
          add_topological(b, view, delta);
        });
      }
      if (relevant) ++searches_;
      break;
    }
  }
  return delta;
}

std::vector<Binding> IncrementalMatcher::matches() const {
  std::vector<Binding> out;
  for (const auto& [b, s] : states_)
    if (s.complete()) out.push_back(b);
  return out;
}

}  // namespace tgfd
