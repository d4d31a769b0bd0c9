#include "tgfd/model.hpp"

#include <algorithm>
#include <deque>

#include "tgfd/error.hpp"
#include "tgfd/graph_io.hpp"

namespace tgfd {

int GraphPattern::add_node(const std::string& var, const std::string& label) {
  if (var_index(var) >= 0) throw SyntaxError(0, "duplicate pattern variable '" + var + "'");
  nodes_.push_back({var, label});
  return static_cast<int>(nodes_.size()) - 1;
}

void GraphPattern::add_edge(const std::string& src_var, const std::string& label, const std::string& dst_var) {
  int s = var_index(src_var), d = var_index(dst_var);
  if (s < 0) throw UnknownVariable(0, "unknown variable '" + src_var + "'");
  if (d < 0) throw UnknownVariable(0, "unknown variable '" + dst_var + "'");
  add_edge(s, label, d);
}

void GraphPattern::add_edge(int src, const std::string& label, int dst) {
  PatternEdge e{src, label, dst};
  if (std::find(edges_.begin(), edges_.end(), e) == edges_.end()) edges_.push_back(e);
}

int GraphPattern::var_index(const std::string& var) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].var == var) return static_cast<int>(i);
  return -1;
}

std::vector<int> GraphPattern::distances_from(int v) const {
  std::vector<int> dist(nodes_.size(), -1);
  dist[static_cast<std::size_t>(v)] = 0;
  std::deque<int> queue{v};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (const auto& e : edges_) {
      int w = e.src == u ? e.dst : e.dst == u ? e.src : -1;
      if (w >= 0 && dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool GraphPattern::connected() const {
  if (nodes_.empty()) return true;
  auto d = distances_from(0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

int GraphPattern::eccentricity(int v) const {
  auto d = distances_from(v);
  return *std::max_element(d.begin(), d.end());
}

int GraphPattern::center() const {
  int best = 0, best_ecc = eccentricity(0);
  for (int v = 1; v < static_cast<int>(nodes_.size()); ++v) {
    int e = eccentricity(v);
    if (e < best_ecc) best = v, best_ecc = e;
  }
  return best;
}

int GraphPattern::diameter() const {
  int d = 0;
  for (int v = 0; v < static_cast<int>(nodes_.size()); ++v) d = std::max(d, eccentricity(v));
  return d;
}

std::string to_string(const Literal& l) {
  if (auto* c = std::get_if<ConstantLiteral>(&l)) {
    std::string v = "\"";
    for (char ch : c->value) {
      if (ch == '"' || ch == '\\') v += '\\';
      v += ch;
    }
    return c->ref.var + "." + c->ref.attr + "=" + v + "\"";
  }
  const auto& v = std::get<VariableLiteral>(l);
  return v.left.var + "." + v.left.attr + "==" + v.right.var + "." + v.right.attr;
}

std::vector<std::string> literal_vars(const Literal& l) {
  if (auto* c = std::get_if<ConstantLiteral>(&l)) return {c->ref.var};
  const auto& v = std::get<VariableLiteral>(l);
  if (v.left.var == v.right.var) return {v.left.var};
  return {v.left.var, v.right.var};
}

void validate(const Tgfd& t) {
  if (t.delta.p < 0 || t.delta.p > t.delta.q) {
    throw InvalidDelta(0, t.name + ": interval (" + std::to_string(t.delta.p) + ", " + std::to_string(t.delta.q) +
                              ") needs 0 <= p <= q");
  }
  if (t.y.empty()) throw EmptyConsequent(0, t.name + ": empty consequent");
  if (t.pattern.size() == 0) throw SyntaxError(0, t.name + ": empty pattern");
  if (!t.pattern.connected()) throw SyntaxError(0, t.name + ": pattern is not connected");
  for (const auto* side : {&t.x, &t.y}) {
    for (const auto& l : *side) {
      for (const auto& v : literal_vars(l)) {
        if (t.pattern.var_index(v) < 0) throw UnknownVariable(0, t.name + ": unknown variable '" + v + "'");
      }
    }
  }
}

std::vector<Tgfd> normalize(const std::vector<Tgfd>& rules) {
  std::vector<Tgfd> out;
  for (const auto& r : rules) {
    if (r.y.size() == 1) {
      out.push_back(r);
      continue;
    }
    int k = 0;
    for (const auto& l : r.y) {
      Tgfd n = r;
      n.name = r.name + "#" + std::to_string(++k);
      n.y = {l};
      out.push_back(std::move(n));
    }
  }
  return out;
}

std::vector<Tgfd> apply_mode(std::vector<Tgfd> rules, DetectionMode mode) {
  for (auto& r : rules) {
    if (mode == DetectionMode::kGfd) r.delta = {0, 0};
    if (mode == DetectionMode::kUpperOnly) r.delta.p = 0;
  }
  return rules;
}

namespace {

const std::string* lookup(const GraphPattern& q, const AttrRef& ref, const Snapshot& g, const Binding& h) {
  int i = q.var_index(ref.var);
  if (i < 0) return nullptr;
  Symbol a = g.symbols().find(ref.attr);
  if (a == kNoSymbol) return nullptr;
  return g.attr(h[static_cast<std::size_t>(i)], a);
}

}  // namespace

bool holds(const GraphPattern& q, const ConstantLiteral& l, const Snapshot& g, const Binding& h) {
  const std::string* v = lookup(q, l.ref, g, h);
  return v && *v == l.value;
}

bool pair_satisfies(const GraphPattern& q, const Literal& l, const Snapshot& gi, const Binding& hi,
                    const Snapshot& gj, const Binding& hj) {
  if (auto* c = std::get_if<ConstantLiteral>(&l)) return holds(q, *c, gi, hi) && holds(q, *c, gj, hj);
  const auto& v = std::get<VariableLiteral>(l);
  const std::string* a = lookup(q, v.left, gi, hi);
  const std::string* b = lookup(q, v.right, gj, hj);
  return a && b && *a == *b;
}

bool pair_satisfies(const GraphPattern& q, const std::set<Literal>& ls, const Snapshot& gi, const Binding& hi,
                    const Snapshot& gj, const Binding& hj) {
  return std::all_of(ls.begin(), ls.end(), [&](const Literal& l) { return pair_satisfies(q, l, gi, hi, gj, hj); });
}

std::string format_binding(const GraphPattern& q, const Snapshot& g, const Binding& h) {
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) out += ',';
    out += q.nodes()[i].var + "=" + quote_value(g.vertex_id(h[i]));
  }
  return out;
}

}  // namespace tgfd
