#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tgfd/model.hpp"
#include "tgfd/temporal_graph.hpp"

namespace tgfd {

// A pattern resolved against a symbol table. Labels the table has never seen
// cannot match, which makes the pattern impossible.
struct CompiledPattern {
  struct CEdge {
    int src = 0;
    Symbol label = 0;
    int dst = 0;
  };
  std::vector<Symbol> types;  // kNoSymbol for a wildcard node
  std::vector<CEdge> edges;
  std::vector<std::vector<int>> incident;  // edge indices per node
  bool impossible = false;

  std::size_t size() const { return types.size(); }
  bool type_ok(int var, const Snapshot& s, VertexIndex v) const {
    Symbol t = types[static_cast<std::size_t>(var)];
    return t == kNoSymbol || s.type(v) == t;
  }
};

CompiledPattern compile(const GraphPattern& q, const SymbolTable& symbols);

inline constexpr VertexIndex kUnbound = 0xffffffffu;

// Restricts which vertices may be bound to one pattern node.
struct AnchorFilter {
  int var = -1;
  std::vector<bool> allowed;
  bool accepts(const Binding& b) const {
    return var < 0 || allowed[b[static_cast<std::size_t>(var)]];
  }
};

// All injective, label- and edge-preserving bindings in the snapshot's present
// vertices, sorted. Attribute literals are not checked here.
std::vector<Binding> match_snapshot(const GraphPattern& q, const Snapshot& s, const AnchorFilter* anchor = nullptr);

// Extends a partial binding (unbound slots hold kUnbound) to every full match.
void extend_matches(const CompiledPattern& cq, const Snapshot& s, Binding partial, const AnchorFilter* anchor,
                    const std::function<void(const Binding&)>& emit);

// A maximal directed path of pattern edges: edges[i] runs vars[i] -> vars[i+1].
struct PathPattern {
  std::vector<int> vars;
  std::vector<int> edges;
  int center = 0;  // position in vars with minimum radius
  int radius = 0;
  std::vector<ConstantLiteral> literals;  // constants on this path's variables

  int center_var() const { return vars[static_cast<std::size_t>(center)]; }
  bool has_var(int v) const;
};

// Greedy cover of the pattern by maximal directed paths. The union of the
// path edges equals the pattern's edge set. A pattern without edges yields a
// single one-node path. Each constant is attached to every path containing
// its variable.
std::vector<PathPattern> decompose(const GraphPattern& q, const std::vector<ConstantLiteral>& constants = {});

// Per-candidate state. beta[k] is true iff path k has a topological match
// under the candidate and none of its constants fail. unsat[k] lists the
// failing constants; it is empty whenever path k has no topological match.
struct PartialMatchState {
  Binding candidate;
  std::vector<bool> beta;
  std::vector<std::vector<ConstantLiteral>> unsat;

  bool topological(std::size_t k) const { return beta[k] || !unsat[k].empty(); }
  bool complete() const;
};

struct MatchDelta {
  std::vector<Binding> added;
  std::vector<Binding> removed;
};

// Maintains the MatchSet of one pattern under single changes. Attribute
// changes only touch beta/unsat. Edge inserts run a search seeded on the new
// edge; edge deletes only demote states.
class IncrementalMatcher {
 public:
  IncrementalMatcher(GraphPattern q, std::vector<ConstantLiteral> gating, AnchorFilter anchor = {});

  void initialize(const Snapshot& view);
  // view_after must already contain the change.
  MatchDelta apply(const GraphDelta& d, const Snapshot& view_after);

  // Complete candidates, sorted.
  std::vector<Binding> matches() const;
  const std::map<Binding, PartialMatchState>& states() const { return states_; }
  const std::vector<PathPattern>& paths() const { return paths_; }
  const GraphPattern& pattern() const { return q_; }
  std::size_t isomorphism_searches() const { return searches_; }

 private:
  void refresh_path(PartialMatchState& s, std::size_t k, const Snapshot& view) const;
  void add_topological(const Binding& b, const Snapshot& view, MatchDelta& delta);
  void index_state(const Binding& b);
  void drop_state(const Binding& b);
  bool path_present(const PartialMatchState& s, std::size_t k, const Snapshot& view) const;

  GraphPattern q_;
  std::vector<ConstantLiteral> gating_;
  AnchorFilter anchor_;
  std::vector<PathPattern> paths_;
  CompiledPattern cq_;
  std::vector<Symbol> gating_attrs_;  // resolved attribute per gating literal
  std::map<Binding, PartialMatchState> states_;
  std::vector<std::set<Binding>> by_vertex_;
  std::size_t searches_ = 0;
};

}  // namespace tgfd
