#include "tgfd/foundations.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "tgfd/error.hpp"

namespace tgfd {

void IntervalSet::add(Interval iv) {
  if (iv.lo > iv.hi) return;
  std::vector<Interval> out;
  for (const auto& cur : ivs_) {
    // Overlapping or adjacent integer ranges fuse.
    if (cur.hi + 1 < iv.lo || iv.hi + 1 < cur.lo) {
      out.push_back(cur);
    } else {
      iv = {std::min(iv.lo, cur.lo), std::max(iv.hi, cur.hi)};
    }
  }
  out.push_back(iv);
  std::sort(out.begin(), out.end());
  ivs_ = std::move(out);
}

bool IntervalSet::contains(int x) const {
  return std::any_of(ivs_.begin(), ivs_.end(), [&](const Interval& iv) { return iv.lo <= x && x <= iv.hi; });
}

bool IntervalSet::contains(Interval q) const {
  return std::any_of(ivs_.begin(), ivs_.end(), [&](const Interval& iv) { return iv.lo <= q.lo && q.hi <= iv.hi; });
}

std::optional<Interval> intersect(Interval a, Interval b) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.lo > r.hi) return std::nullopt;
  return r;
}

std::vector<std::vector<int>> find_embeddings(const GraphPattern& small, const GraphPattern& big) {
  std::vector<std::vector<int>> out;
  std::size_t n = small.size();
  if (n > big.size()) return out;
  std::vector<int> f(n, -1);
  std::vector<bool> used(big.size(), false);
  auto label_ok = [&](std::size_t i, std::size_t j) {
    const auto& a = small.nodes()[i].label;
    const auto& b = big.nodes()[j].label;
    return a == kWildcard || (b != kWildcard && a == b);
  };
  auto edges_ok = [&](std::size_t upto) {
    for (const auto& e : small.edges()) {
      if (e.src > static_cast<int>(upto) || e.dst > static_cast<int>(upto)) continue;
      PatternEdge mapped{f[static_cast<std::size_t>(e.src)], e.label, f[static_cast<std::size_t>(e.dst)]};
      if (std::find(big.edges().begin(), big.edges().end(), mapped) == big.edges().end()) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(f);
      return;
    }
    for (std::size_t j = 0; j < big.size(); ++j) {
      if (used[j] || !label_ok(i, j)) continue;
      f[i] = static_cast<int>(j);
      used[j] = true;
      if (edges_ok(i)) self(self, i + 1);
      used[j] = false;
      f[i] = -1;
    }
  };
  rec(rec, 0);
  return out;
}

std::optional<std::vector<int>> find_embedding(const GraphPattern& small, const GraphPattern& big) {
  auto all = find_embeddings(small, big);
  if (all.empty()) return std::nullopt;
  return all.front();
}

namespace {

AttrRef rename_ref(const AttrRef& r, const GraphPattern& from, const std::vector<int>& f, const GraphPattern& to) {
  int i = from.var_index(r.var);
  if (i < 0) throw UnknownVariable(0, "unknown variable '" + r.var + "'");
  return {to.var(f[static_cast<std::size_t>(i)]), r.attr};
}

}  // namespace

Literal rename(const Literal& l, const GraphPattern& from, const std::vector<int>& f, const GraphPattern& to) {
  if (auto* c = std::get_if<ConstantLiteral>(&l)) return ConstantLiteral{rename_ref(c->ref, from, f, to), c->value};
  const auto& v = std::get<VariableLiteral>(l);
  return VariableLiteral{rename_ref(v.left, from, f, to), rename_ref(v.right, from, f, to)};
}

std::set<Literal> rename(const std::set<Literal>& ls, const GraphPattern& from, const std::vector<int>& f,
                         const GraphPattern& to) {
  std::set<Literal> out;
  for (const auto& l : ls) out.insert(rename(l, from, f, to));
  return out;
}

namespace {

// A rule of sigma seen through one embedding into the pattern under analysis.
struct EmbeddedRule {
  std::set<Literal> x;
  std::set<Literal> y;
  Interval delta;
};

std::vector<EmbeddedRule> embed_all(const GraphPattern& q, const std::vector<Tgfd>& sigma) {
  std::vector<EmbeddedRule> out;
  for (const auto& r : sigma) {
    for (const auto& f : find_embeddings(r.pattern, q)) {
      out.push_back({rename(r.x, r.pattern, f, q), rename(r.y, r.pattern, f, q), {r.delta.p, r.delta.q}});
    }
  }
  return out;
}

// Literals are two-sided: u.A = c ties both sides' u.A to c, and
// u.A = u'.A' ties the first match's u.A to the second match's u'.A'.
class Equalities {
 public:
  void assert_literal(const Literal& l) {
    if (auto* c = std::get_if<ConstantLiteral>(&l)) {
      int k = node("C", c->value);
      unite(node("L", key(c->ref)), k);
      unite(node("R", key(c->ref)), k);
    } else {
      const auto& v = std::get<VariableLiteral>(l);
      unite(node("L", key(v.left)), node("R", key(v.right)));
    }
  }

  bool derivable(const Literal& l) {
    if (auto* c = std::get_if<ConstantLiteral>(&l)) {
      int k = node("C", c->value);
      return find(node("L", key(c->ref))) == find(k) && find(node("R", key(c->ref))) == find(k);
    }
    const auto& v = std::get<VariableLiteral>(l);
    return find(node("L", key(v.left))) == find(node("R", key(v.right)));
  }

  int class_of(const ConstantLiteral& c) { return find(node("C", c.value)); }

 private:
  static std::string key(const AttrRef& r) { return r.var + "." + r.attr; }

  int node(const std::string& kind, const std::string& name) {
    auto [it, fresh] = ids_.emplace(kind + "|" + name, static_cast<int>(parent_.size()));
    if (fresh) parent_.push_back(it->second);
    return it->second;
  }
  int find(int a) {
    while (parent_[static_cast<std::size_t>(a)] != a) {
      parent_[static_cast<std::size_t>(a)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(a)])];
      a = parent_[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

  std::map<std::string, int> ids_;
  std::vector<int> parent_;
};

// Gaps are handled per elementary segment: between consecutive interval
// endpoints the set of active rules is constant, so one fixpoint per segment
// covers every gap in it.
std::vector<Interval> segments(Interval seed_on, const std::vector<EmbeddedRule>& rules) {
  std::vector<int> cuts{0, seed_on.lo, seed_on.hi + 1};
  for (const auto& r : rules) {
    cuts.push_back(r.delta.lo);
    cuts.push_back(r.delta.hi + 1);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back({cuts[i], cuts[i + 1] - 1});
  return out;
}

struct PointState {
  Equalities eq;
  std::vector<Literal> asserted;
};

PointState fixpoint(int gap, const std::set<Literal>& seeds, Interval seed_on, const std::vector<EmbeddedRule>& rules) {
  PointState st;
  if (seed_on.lo <= gap && gap <= seed_on.hi) {
    for (const auto& l : seeds) {
      st.eq.assert_literal(l);
      st.asserted.push_back(l);
    }
  }
  std::vector<bool> fired(rules.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto& r = rules[i];
      if (fired[i] || gap < r.delta.lo || gap > r.delta.hi) continue;
      bool ready = std::all_of(r.x.begin(), r.x.end(), [&](const Literal& l) { return st.eq.derivable(l); });
      if (!ready) continue;
      fired[i] = changed = true;
      for (const auto& l : r.y) {
        st.eq.assert_literal(l);
        st.asserted.push_back(l);
      }
    }
  }
  return st;
}

}  // namespace

std::vector<ClosureEntry> closure(const GraphPattern& q, const std::set<Literal>& seeds, Interval seed_on,
                                  const std::vector<Tgfd>& sigma) {
  auto rules = embed_all(q, sigma);
  std::set<Literal> universe = seeds;
  for (const auto& r : rules) {
    universe.insert(r.x.begin(), r.x.end());
    universe.insert(r.y.begin(), r.y.end());
  }
  std::map<Literal, IntervalSet> valid;
  for (const auto& seg : segments(seed_on, rules)) {
    PointState st = fixpoint(seg.lo, seeds, seed_on, rules);
    for (const auto& l : universe)
      if (st.eq.derivable(l)) valid[l].add(seg);
  }
  std::vector<ClosureEntry> out;
  for (auto& [l, s] : valid) out.push_back({l, s});
  return out;
}

ImplicationResult check_implication(const std::vector<Tgfd>& sigma, const Tgfd& phi) {
  auto rules = embed_all(phi.pattern, sigma);
  Interval on{phi.delta.p, phi.delta.q};
  ImplicationResult res;
  for (const auto& seg : segments(on, rules)) {
    PointState st = fixpoint(seg.lo, phi.x, on, rules);
    bool all = std::all_of(phi.y.begin(), phi.y.end(), [&](const Literal& l) { return st.eq.derivable(l); });
    if (all) res.derivable.add(seg);
  }
  res.implied = res.derivable.contains(on);
  return res;
}

SatResult check_satisfiability(const std::vector<Tgfd>& sigma) {
  struct Conflict {
    Interval gaps;
    std::string a, b;
    std::string anchor;
    Literal la, lb;
  };
  std::optional<Conflict> best;
  for (const auto& anchor : sigma) {
    auto rules = embed_all(anchor.pattern, sigma);
    Interval on{anchor.delta.p, anchor.delta.q};
    // (literal pair) -> gaps where it conflicts
    std::map<std::pair<Literal, Literal>, IntervalSet> conflicts;
    for (const auto& seg : segments(on, rules)) {
      if (seg.hi < on.lo || seg.lo > on.hi) continue;
      PointState st = fixpoint(seg.lo, anchor.x, on, rules);
      std::vector<ConstantLiteral> consts;
      for (const auto& l : st.asserted)
        if (auto* c = std::get_if<ConstantLiteral>(&l)) consts.push_back(*c);
      std::sort(consts.begin(), consts.end());
      consts.erase(std::unique(consts.begin(), consts.end()), consts.end());
      for (std::size_t i = 0; i < consts.size(); ++i) {
        for (std::size_t j = i + 1; j < consts.size(); ++j) {
          if (consts[i].value != consts[j].value && st.eq.class_of(consts[i]) == st.eq.class_of(consts[j])) {
            conflicts[{consts[i], consts[j]}].add(seg);
          }
        }
      }
    }
    for (const auto& [pair, gaps] : conflicts) {
      for (const auto& iv : gaps.intervals()) {
        Conflict c{iv, to_string(pair.first), to_string(pair.second), anchor.name, pair.first, pair.second};
        auto rank = [](const Conflict& x) { return std::tie(x.gaps, x.a, x.b, x.anchor); };
        if (!best || rank(c) < rank(*best)) best = c;
      }
    }
  }
  SatResult res;
  if (best) {
    res.satisfiable = false;
    res.witness = SatWitness{best->anchor, best->la, best->lb, best->gaps};
  }
  return res;
}

std::size_t axiom_arity(Axiom a) {
  switch (a) {
    case Axiom::kReflexivity:
      return 0;
    case Axiom::kTransitivity:
    case Axiom::kIntervalIntersection:
      return 2;
    default:
      return 1;
  }
}

namespace {

bool same_delta(const Tgfd& a, const Tgfd& b) { return a.delta == b.delta; }

bool subset(const std::set<Literal>& a, const std::set<Literal>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

bool axiom_check(Axiom a, const std::vector<Tgfd>& premises, const Tgfd& c) {
  if (premises.size() != axiom_arity(a)) {
    throw ArityMismatch("axiom " + std::to_string(static_cast<int>(a)) + " takes " +
                        std::to_string(axiom_arity(a)) + " premises, got " + std::to_string(premises.size()));
  }
  switch (a) {
    case Axiom::kReflexivity:
      return !c.y.empty() && subset(c.y, c.x);
    case Axiom::kLiteralAugmentation: {
      const Tgfd& p = premises[0];
      return p.pattern == c.pattern && same_delta(p, c) && p.y == c.y && subset(p.x, c.x);
    }
    case Axiom::kPatternAugmentation: {
      const Tgfd& p = premises[0];
      if (!same_delta(p, c)) return false;
      for (const auto& f : find_embeddings(p.pattern, c.pattern)) {
        if (rename(p.x, p.pattern, f, c.pattern) == c.x && rename(p.y, p.pattern, f, c.pattern) == c.y) return true;
      }
      return false;
    }
    case Axiom::kTransitivity: {
      // premises: (Q', X -> W) and (Q, W -> Y); conclusion (Q, X -> Y).
      const Tgfd& first = premises[0];
      const Tgfd& second = premises[1];
      if (!same_delta(first, c) || !same_delta(second, c)) return false;
      if (second.pattern != c.pattern || second.y != c.y) return false;
      for (const auto& f : find_embeddings(first.pattern, c.pattern)) {
        if (rename(first.x, first.pattern, f, c.pattern) == c.x &&
            rename(first.y, first.pattern, f, c.pattern) == second.x)
          return true;
      }
      return false;
    }
    case Axiom::kDecomposition: {
      const Tgfd& p = premises[0];
      return p.pattern == c.pattern && same_delta(p, c) && p.x == c.x && !c.y.empty() && subset(c.y, p.y);
    }
    case Axiom::kIntervalIntersection: {
      const Tgfd& p1 = premises[0];
      const Tgfd& p2 = premises[1];
      if (p1.pattern != c.pattern || p2.pattern != c.pattern) return false;
      if (p1.x != c.x || p2.x != c.x || p1.y != c.y || p2.y != c.y) return false;
      auto iv = intersect({p1.delta.p, p1.delta.q}, {p2.delta.p, p2.delta.q});
      return iv && iv->lo == c.delta.p && iv->hi == c.delta.q;
    }
    case Axiom::kIntervalContainment: {
      const Tgfd& p = premises[0];
      return p.pattern == c.pattern && p.x == c.x && p.y == c.y && p.delta.p <= c.delta.p && c.delta.q <= p.delta.q;
    }
  }
  return false;
}

}  // namespace tgfd
