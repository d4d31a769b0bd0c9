#pragma once

#include <compare>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tgfd/temporal_graph.hpp"

namespace tgfd {

inline const std::string kWildcard = "_";

struct PatternNode {
  std::string var;
  std::string label;  // kWildcard matches any type
  friend auto operator<=>(const PatternNode&, const PatternNode&) = default;
};

struct PatternEdge {
  int src = 0;
  std::string label;
  int dst = 0;
  friend auto operator<=>(const PatternEdge&, const PatternEdge&) = default;
};

class GraphPattern {
 public:
  int add_node(const std::string& var, const std::string& label);
  void add_edge(const std::string& src_var, const std::string& label, const std::string& dst_var);
  void add_edge(int src, const std::string& label, int dst);

  const std::vector<PatternNode>& nodes() const { return nodes_; }
  const std::vector<PatternEdge>& edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }
  int var_index(const std::string& var) const;  // -1 if absent
  const std::string& var(int i) const { return nodes_[static_cast<std::size_t>(i)].var; }

  bool connected() const;
  // Undirected hop distance; -1 when unreachable.
  std::vector<int> distances_from(int v) const;
  int eccentricity(int v) const;
  // Minimum-eccentricity node, lowest index on ties.
  int center() const;
  int diameter() const;

  friend bool operator==(const GraphPattern&, const GraphPattern&) = default;

 private:
  std::vector<PatternNode> nodes_;
  std::vector<PatternEdge> edges_;
};

struct AttrRef {
  std::string var;
  std::string attr;
  friend auto operator<=>(const AttrRef&, const AttrRef&) = default;
};

// u.A = "c"
struct ConstantLiteral {
  AttrRef ref;
  std::string value;
  friend auto operator<=>(const ConstantLiteral&, const ConstantLiteral&) = default;
};

// u.A == u'.A'
struct VariableLiteral {
  AttrRef left;
  AttrRef right;
  bool self_form() const { return left == right; }
  friend auto operator<=>(const VariableLiteral&, const VariableLiteral&) = default;
};

using Literal = std::variant<ConstantLiteral, VariableLiteral>;

std::string to_string(const Literal& l);
std::vector<std::string> literal_vars(const Literal& l);

struct Delta {
  int p = 0;
  int q = 0;
  bool contains(int gap) const { return p <= gap && gap <= q; }
  friend auto operator<=>(const Delta&, const Delta&) = default;
};

struct Tgfd {
  std::string name;
  GraphPattern pattern;
  Delta delta;
  std::set<Literal> x;
  std::set<Literal> y;
};

// Throws UnknownVariable, InvalidDelta or EmptyConsequent.
void validate(const Tgfd& t);

// One TGFD per consequent literal. A rule with a single Y literal keeps its
// name; otherwise the k-th literal (in literal order) gets "name#k".
std::vector<Tgfd> normalize(const std::vector<Tgfd>& rules);

enum class DetectionMode { kTgfd, kGfd, kUpperOnly };

// kGfd forces every interval to (0,0); kUpperOnly forces p=0.
std::vector<Tgfd> apply_mode(std::vector<Tgfd> rules, DetectionMode mode);

using Binding = std::vector<VertexIndex>;

struct MatchBinding {
  Timestamp t = 0;
  Binding assignment;
  friend auto operator<=>(const MatchBinding&, const MatchBinding&) = default;
};

// Pair semantics: a constant literal needs both sides to carry the constant,
// a variable literal compares h_i(u).A with h_j(u').A'. A missing attribute
// makes the literal false.
bool pair_satisfies(const GraphPattern& q, const Literal& l, const Snapshot& gi, const Binding& hi,
                    const Snapshot& gj, const Binding& hj);
bool pair_satisfies(const GraphPattern& q, const std::set<Literal>& ls, const Snapshot& gi, const Binding& hi,
                    const Snapshot& gj, const Binding& hj);

// Single-binding check of a constant literal.
bool holds(const GraphPattern& q, const ConstantLiteral& l, const Snapshot& g, const Binding& h);

std::string format_binding(const GraphPattern& q, const Snapshot& g, const Binding& h);

}  // namespace tgfd
