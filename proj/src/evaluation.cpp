#include "tgfd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>
#include <tuple>

#include "tgfd/error.hpp"
#include "tgfd/graph_io.hpp"
#include "tgfd/matcher.hpp"
#include "tgfd/report.hpp"

namespace tgfd {

ChangeProfile parse_profile(const std::string& name) {
  if (name == "uniform") return ChangeProfile::kUniform;
  if (name == "skewed-au") return ChangeProfile::kSkewedAU;
  if (name == "skewed-ed") return ChangeProfile::kSkewedED;
  if (name == "skewed-ei") return ChangeProfile::kSkewedEI;
  throw std::invalid_argument("unknown change profile '" + name + "'");
}

std::string profile_name(ChangeProfile p) {
  switch (p) {
    case ChangeProfile::kUniform: return "uniform";
    case ChangeProfile::kSkewedAU: return "skewed-au";
    case ChangeProfile::kSkewedED: return "skewed-ed";
    case ChangeProfile::kSkewedEI: return "skewed-ei";
  }
  return "uniform";
}

ChangeMix split_changes(std::size_t count, ChangeProfile p) {
  double ed = 0.3, ei = 0.3;
  switch (p) {
    case ChangeProfile::kUniform: break;
    case ChangeProfile::kSkewedAU: ed = ei = 0.075; break;
    case ChangeProfile::kSkewedED: ed = 0.85, ei = 0.075; break;
    case ChangeProfile::kSkewedEI: ed = 0.075, ei = 0.85; break;
  }
  auto c = static_cast<double>(count);
  ChangeMix m;
  m.edge_deletes = static_cast<std::size_t>(std::llround(ed * c));
  m.edge_inserts = static_cast<std::size_t>(std::llround(ei * c));
  if (m.edge_deletes > count) m.edge_deletes = count;
  if (m.edge_deletes + m.edge_inserts > count) m.edge_inserts = count - m.edge_deletes;
  m.attr_updates = count - m.edge_deletes - m.edge_inserts;
  return m;
}

namespace {

using EdgeKey = std::tuple<std::size_t, int, std::size_t>;

std::string vid(std::size_t i) { return "v" + std::to_string(i); }
std::string label_name(int l) { return "l" + std::to_string(l); }
std::string attr_name(int a) { return "a" + std::to_string(a); }
std::string value_name(int c) { return "c" + std::to_string(c); }

}  // namespace

SyntheticGraph generate_synthetic(const SynthParams& p) {
  if (p.vertices == 0 || p.types < 1 || p.labels < 1 || p.attrs < 0 || p.domain < 1 || p.T < 1 || p.chg_rate < 0) {
    throw std::invalid_argument("synthetic graph parameters must be positive");
  }
  std::mt19937_64 rng(p.seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto pick_int = [&](int n) { return static_cast<int>(pick(static_cast<std::size_t>(n))); };

  SyntheticGraph out;
  std::vector<std::vector<int>> values(p.vertices, std::vector<int>(static_cast<std::size_t>(p.attrs)));
  for (std::size_t v = 0; v < p.vertices; ++v) {
    VertexRecord r{vid(v), "T" + std::to_string(pick_int(p.types)), {}};
    for (int a = 0; a < p.attrs; ++a) {
      int c = pick_int(p.domain);
      values[v][static_cast<std::size_t>(a)] = c;
      r.attrs.emplace_back(attr_name(a), value_name(c));
    }
    out.base.vertices.push_back(std::move(r));
  }

  std::set<EdgeKey> present;
  std::vector<EdgeKey> edge_list;
  auto try_insert = [&](std::size_t s, int l, std::size_t d) {
    if (s == d || present.count({s, l, d})) return false;
    present.insert({s, l, d});
    edge_list.push_back({s, l, d});
    return true;
  };
  if (p.vertices > 1) {
    for (std::size_t tries = 0; edge_list.size() < p.edges && tries < 20 * p.edges + 100; ++tries) {
      try_insert(pick(p.vertices), pick_int(p.labels), pick(p.vertices));
    }
  }
  for (const auto& [s, l, d] : edge_list) out.base.edges.push_back({vid(s), label_name(l), vid(d)});

  std::vector<std::size_t> hot;
  std::vector<bool> is_hot(p.vertices, p.hotspot.empty());
  for (const auto& id : p.hotspot) {
    if (id.size() < 2 || id[0] != 'v') throw UnknownVertex(id);
    std::size_t i = std::stoul(id.substr(1));
    if (i >= p.vertices) throw UnknownVertex(id);
    hot.push_back(i);
    is_hot[i] = true;
  }
  if (hot.empty())
    for (std::size_t i = 0; i < p.vertices; ++i) hot.push_back(i);

  auto per_step = static_cast<std::size_t>(std::llround(p.chg_rate * static_cast<double>(p.edges)));
  ChangeMix mix = split_changes(per_step, p.profile);
  for (int t = 2; t <= p.T; ++t) {
    ChangeSet cs;
    cs.t = t;
    for (std::size_t k = 0; k < mix.edge_deletes; ++k) {
      std::vector<std::size_t> cand;
      for (std::size_t i = 0; i < edge_list.size(); ++i) {
        auto [s, l, d] = edge_list[i];
        if (is_hot[s] || is_hot[d]) cand.push_back(i);
      }
      if (cand.empty()) break;
      std::size_t i = cand[pick(cand.size())];
      auto [s, l, d] = edge_list[i];
      present.erase(edge_list[i]);
      edge_list[i] = edge_list.back();
      edge_list.pop_back();
      cs.changes.push_back(EdgeDelete{vid(s), label_name(l), vid(d)});
    }
    for (std::size_t k = 0; k < mix.edge_inserts && hot.size() > 1; ++k) {
      for (int tries = 0; tries < 100; ++tries) {
        std::size_t s = hot[pick(hot.size())], d = hot[pick(hot.size())];
        int l = pick_int(p.labels);
        if (try_insert(s, l, d)) {
          cs.changes.push_back(EdgeInsert{vid(s), label_name(l), vid(d)});
          break;
        }
      }
    }
    for (std::size_t k = 0; k < mix.attr_updates && p.attrs > 0; ++k) {
      std::size_t v = hot[pick(hot.size())];
      int a = pick_int(p.attrs);
      int& cur = values[v][static_cast<std::size_t>(a)];
      int c = p.domain > 1 ? (cur + 1 + pick_int(p.domain - 1)) % p.domain : cur;
      cur = c;
      cs.changes.push_back(AttrSet{vid(v), attr_name(a), value_name(c)});
    }
    out.changes.push_back(std::move(cs));
  }
  return out;
}

TemporalGraph build_graph(const GraphData& base, const std::vector<ChangeSet>& changes) {
  TemporalGraph g(base);
  for (const auto& cs : changes) g.apply_changes(cs);
  return g;
}

namespace {

struct MatchRow {
  Timestamp t;
  Binding b;
};

// Calls f(first, second) for every pair of matches whose gap lies in the
// rule's interval, oriented (t, binding) ascending. Self pairs are included
// when with_self is set and 0 is in the interval.
template <class F>
void for_pairs(const Tgfd& r, const TemporalGraph& g, bool with_self, F&& f) {
  std::vector<std::vector<Binding>> m(static_cast<std::size_t>(g.T()) + 1);
  for (Timestamp t = 1; t <= g.T(); ++t) m[static_cast<std::size_t>(t)] = match_snapshot(r.pattern, g.snapshot(t));
  for (Timestamp ti = 1; ti <= g.T(); ++ti) {
    for (Timestamp tj = ti; tj <= g.T(); ++tj) {
      if (!r.delta.contains(tj - ti)) continue;
      const auto& mi = m[static_cast<std::size_t>(ti)];
      const auto& mj = m[static_cast<std::size_t>(tj)];
      for (std::size_t a = 0; a < mi.size(); ++a) {
        for (std::size_t b = ti == tj ? a : 0; b < mj.size(); ++b) {
          if (ti == tj && a == b && !with_self) continue;
          f(MatchRow{ti, mi[a]}, MatchRow{tj, mj[b]});
        }
      }
    }
  }
}

bool x_ok(const Tgfd& r, const TemporalGraph& g, const MatchRow& a, const MatchRow& b) {
  return pair_satisfies(r.pattern, r.x, g.snapshot(a.t), a.b, g.snapshot(b.t), b.b);
}

bool y_ok(const Tgfd& r, const TemporalGraph& g, const MatchRow& a, const MatchRow& b) {
  return pair_satisfies(r.pattern, r.y, g.snapshot(a.t), a.b, g.snapshot(b.t), b.b);
}

}  // namespace

std::vector<Violation> enumerate_violations(const TemporalGraph& g, const std::vector<Tgfd>& rules) {
  std::set<Violation> out;
  for (const auto& r : normalize(rules)) {
    const Literal& y = *r.y.begin();
    if (auto* c = std::get_if<ConstantLiteral>(&y)) {
      std::string text = to_string(y);
      for_pairs(r, g, true, [&](const MatchRow& a, const MatchRow& b) {
        if (!x_ok(r, g, a, b)) return;
        if (!holds(r.pattern, *c, g.snapshot(a.t), a.b)) out.insert(ConstantViolation{r.name, a.t, a.b, text});
        if (!holds(r.pattern, *c, g.snapshot(b.t), b.b)) out.insert(ConstantViolation{r.name, b.t, b.b, text});
      });
    } else {
      for_pairs(r, g, true, [&](const MatchRow& a, const MatchRow& b) {
        if (x_ok(r, g, a, b) && !y_ok(r, g, a, b)) out.insert(PairViolation{r.name, a.t, a.b, b.t, b.b});
      });
    }
  }
  return {out.begin(), out.end()};
}

double InjectionLedger::cross_snapshot_fraction() const {
  if (gamma_plus.empty()) return 0;
  std::size_t cross = 0;
  for (const auto& v : gamma_plus) {
    if (auto* p = std::get_if<PairViolation>(&v)) cross += p->t_i != p->t_j ? 1 : 0;
  }
  return static_cast<double>(cross) / static_cast<double>(gamma_plus.size());
}

namespace {

struct PoolPair {
  std::size_t rule = 0;
  MatchRow first;
  MatchRow second;
};

struct Target {
  Timestamp t;
  VertexIndex v;
  std::string attr;
  friend auto operator<=>(const Target&, const Target&) = default;
};

// Attribute terms each side of a pair reads.
void literal_terms(const Literal& l, std::vector<AttrRef>& first, std::vector<AttrRef>& second) {
  if (auto* c = std::get_if<ConstantLiteral>(&l)) {
    first.push_back(c->ref);
    second.push_back(c->ref);
  } else {
    const auto& v = std::get<VariableLiteral>(l);
    first.push_back(v.left);
    second.push_back(v.right);
  }
}

AttrRef y_second_term(const Tgfd& r) {
  const Literal& y = *r.y.begin();
  if (auto* c = std::get_if<ConstantLiteral>(&y)) return c->ref;
  return std::get<VariableLiteral>(y).right;
}

// Mutating the second member's Y attribute breaks Y without touching X or
// the first member's Y.
bool breakable(const Tgfd& r, const PoolPair& pp) {
  AttrRef yt = y_second_term(r);
  VertexIndex target = pp.second.b[static_cast<std::size_t>(r.pattern.var_index(yt.var))];
  std::vector<AttrRef> first, second;
  for (const auto& l : r.x) literal_terms(l, first, second);
  auto hits = [&](const std::vector<AttrRef>& refs, const Binding& b) {
    return std::any_of(refs.begin(), refs.end(), [&](const AttrRef& a) {
      return a.attr == yt.attr && b[static_cast<std::size_t>(r.pattern.var_index(a.var))] == target;
    });
  };
  if (hits(second, pp.second.b)) return false;
  if (pp.first.t == pp.second.t) {
    std::vector<AttrRef> yf, ys;
    literal_terms(*r.y.begin(), yf, ys);
    if (hits(first, pp.first.b) || hits(yf, pp.first.b)) return false;
  }
  return true;
}

Violation expected_violation(const Tgfd& r, const PoolPair& pp) {
  const Literal& y = *r.y.begin();
  if (std::holds_alternative<ConstantLiteral>(y)) return ConstantViolation{r.name, pp.second.t, pp.second.b, to_string(y)};
  return PairViolation{r.name, pp.first.t, pp.first.b, pp.second.t, pp.second.b};
}

std::vector<std::size_t> sample(std::size_t pool, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(pool);
  for (std::size_t i = 0; i < pool; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::min(k, pool));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

Injected inject_errors(const GraphData& base, const std::vector<ChangeSet>& changes, const std::vector<Tgfd>& rules,
                       const InjectOptions& opts) {
  if (opts.err_rate < 0 || opts.err_rate > 1) throw std::invalid_argument("err_rate must lie in [0, 1]");
  std::vector<Tgfd> norm = normalize(rules);
  TemporalGraph clean = build_graph(base, changes);
  const Timestamp T = clean.T();
  Injected out;
  out.base = base;
  out.changes = changes;
  InjectionLedger& ledger = out.ledger;
  ledger.baseline = enumerate_violations(clean, norm);

  std::vector<PoolPair> pool;
  for (std::size_t r = 0; r < norm.size(); ++r) {
    for_pairs(norm[r], clean, false, [&](const MatchRow& a, const MatchRow& b) {
      if (!x_ok(norm[r], clean, a, b) || !y_ok(norm[r], clean, a, b)) return;
      PoolPair pp{r, a, b};
      if (breakable(norm[r], pp)) pool.push_back(std::move(pp));
    });
  }
  ledger.pool = pool.size();

  std::mt19937_64 rng(opts.seed);
  std::map<Target, Mutation> muts;
  std::vector<bool> used(pool.size(), false);
  std::size_t fresh = 0;
  auto vertex_of = [&](const Tgfd& r, const Binding& b, const AttrRef& ref) {
    return b[static_cast<std::size_t>(r.pattern.var_index(ref.var))];
  };
  auto clean_value = [&](Timestamp t, VertexIndex v, const std::string& attr) {
    Symbol a = clean.symbols().find(attr);
    const std::string* val = a == kNoSymbol ? nullptr : clean.snapshot(t).attr(v, a);
    return val ? *val : std::string();
  };

  if (opts.positive) {
    ledger.requested_positive =
        static_cast<std::size_t>(std::llround(opts.err_rate * static_cast<double>(pool.size())));
    for (std::size_t i : sample(pool.size(), ledger.requested_positive, rng)) {
      const PoolPair& pp = pool[i];
      const Tgfd& r = norm[pp.rule];
      AttrRef ref = y_second_term(r);
      VertexIndex v = vertex_of(r, pp.second.b, ref);
      Target key{pp.second.t, v, ref.attr};
      Mutation m{pp.second.t, clean.context().ids[v], ref.attr, "err" + std::to_string(fresh++),
                 clean_value(pp.second.t, v, ref.attr), true};
      muts[key] = m;
      used[i] = true;
      ledger.sampled_positive.push_back(expected_violation(r, pp));
    }
  }

  std::set<Violation> negatives;
  if (opts.negative) {
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!used[i] && std::holds_alternative<VariableLiteral>(*norm[pool[i].rule].y.begin())) cand.push_back(i);
    }
    ledger.requested_negative =
        static_cast<std::size_t>(std::llround(opts.err_rate * static_cast<double>(cand.size())));
    for (std::size_t ci : sample(cand.size(), ledger.requested_negative, rng)) {
      const PoolPair& pp = pool[cand[ci]];
      const Tgfd& r = norm[pp.rule];
      const auto& y = std::get<VariableLiteral>(*r.y.begin());
      VertexIndex vf = vertex_of(r, pp.first.b, y.left);
      VertexIndex vs = vertex_of(r, pp.second.b, y.right);
      Target kf{pp.first.t, vf, y.left.attr}, ks{pp.second.t, vs, y.right.attr};
      if (muts.count(kf) || muts.count(ks)) continue;
      // A value from the X domain of another rule reading the same attribute.
      std::vector<std::string> domain;
      for (std::size_t o = 0; o < norm.size() && domain.empty(); ++o) {
        if (o == pp.rule || norm[o].name.substr(0, norm[o].name.find('#')) ==
                                 r.name.substr(0, r.name.find('#')))
          continue;
        for (const auto& l : norm[o].x) {
          if (auto* c = std::get_if<ConstantLiteral>(&l)) {
            if (c->ref.attr == y.left.attr) domain.push_back(c->value);
          } else {
            const auto& vl = std::get<VariableLiteral>(l);
            if (vl.left.attr != y.left.attr && vl.right.attr != y.left.attr) continue;
            std::set<std::string> seen;
            Symbol a = clean.symbols().find(y.left.attr);
            for (VertexIndex u = 0; a != kNoSymbol && u < clean.vertex_count(); ++u)
              if (const std::string* val = clean.snapshot(1).attr(u, a)) seen.insert(*val);
            domain.insert(domain.end(), seen.begin(), seen.end());
          }
        }
      }
      if (domain.empty()) {
        ledger.negative_fallback = true;
        std::set<std::string> seen;
        Symbol a = clean.symbols().find(y.left.attr);
        for (VertexIndex u = 0; a != kNoSymbol && u < clean.vertex_count(); ++u)
          if (const std::string* val = clean.snapshot(1).attr(u, a)) seen.insert(*val);
        domain.assign(seen.begin(), seen.end());
      }
      if (domain.empty()) continue;
      std::string value = domain[std::uniform_int_distribution<std::size_t>(0, domain.size() - 1)(rng)];
      muts[kf] = {pp.first.t, clean.context().ids[vf], y.left.attr, value, clean_value(pp.first.t, vf, y.left.attr),
                  false};
      muts[ks] = {pp.second.t, clean.context().ids[vs], y.right.attr, value,
                  clean_value(pp.second.t, vs, y.right.attr), false};
      negatives.insert(PairViolation{r.name, pp.first.t, pp.first.b, pp.second.t, pp.second.b});
    }
  }
  ledger.insufficient = ledger.sampled_positive.size() < ledger.requested_positive ||
                        negatives.size() < ledger.requested_negative;
  if (ledger.insufficient && opts.strict) {
    throw InsufficientPairs("requested " + std::to_string(ledger.requested_positive) + "+" +
                            std::to_string(ledger.requested_negative) + " pairs, injected " +
                            std::to_string(ledger.sampled_positive.size()) + "+" + std::to_string(negatives.size()));
  }

  // Each mutation is set at the end of its snapshot's change set (or in the
  // base graph) and undone at the start of the next one.
  std::map<Timestamp, std::vector<Change>> restores;
  for (const auto& [key, m] : muts) {
    ledger.mutations.push_back(m);
    if (m.t == 1) {
      for (auto& vr : out.base.vertices) {
        if (vr.id != m.vertex) continue;
        auto it = std::find_if(vr.attrs.begin(), vr.attrs.end(), [&](const auto& kv) { return kv.first == m.attr; });
        if (it == vr.attrs.end())
          vr.attrs.emplace_back(m.attr, m.value);
        else
          it->second = m.value;
      }
    } else {
      out.changes[static_cast<std::size_t>(m.t - 2)].changes.push_back(AttrSet{m.vertex, m.attr, m.value});
    }
    if (m.t < T) {
      Change undo = m.restored.empty() ? Change(AttrDelete{m.vertex, m.attr})
                                       : Change(AttrSet{m.vertex, m.attr, m.restored});
      restores[m.t + 1].push_back(std::move(undo));
    }
  }
  for (auto& [t, undo] : restores) {
    auto& cs = out.changes[static_cast<std::size_t>(t - 2)].changes;
    cs.insert(cs.begin(), undo.begin(), undo.end());
  }

  TemporalGraph dirty = build_graph(out.base, out.changes);
  std::vector<Violation> after = enumerate_violations(dirty, norm);
  std::set_difference(after.begin(), after.end(), ledger.baseline.begin(), ledger.baseline.end(),
                      std::back_inserter(ledger.gamma_plus));
  for (const auto& v : negatives) {
    if (!std::binary_search(after.begin(), after.end(), v)) ledger.gamma_minus.push_back(v);
  }
  return out;
}

Metrics score(const std::vector<Violation>& detected, const InjectionLedger& ledger) {
  std::set<Violation> base(ledger.baseline.begin(), ledger.baseline.end());
  std::set<Violation> plus(ledger.gamma_plus.begin(), ledger.gamma_plus.end());
  std::set<Violation> minus(ledger.gamma_minus.begin(), ledger.gamma_minus.end());
  std::set<Violation> found;
  for (const auto& v : detected)
    if (!base.count(v)) found.insert(v);
  Metrics m;
  m.detected = found.size();
  std::size_t fp_minus = 0;
  for (const auto& v : found) {
    m.true_positives += plus.count(v);
    fp_minus += minus.count(v);
  }
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(m.true_positives, found.size());
  m.recall = ratio(m.true_positives, plus.size());
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0;
  if (!minus.empty()) m.fpr = ratio(fp_minus, minus.size());
  return m;
}

void write_ledger(std::ostream& out, const InjectionLedger& ledger, const std::vector<Tgfd>& rules,
                  const TemporalGraph& g) {
  out << "pool " << ledger.pool << '\n';
  out << "requested positive=" << ledger.requested_positive << " negative=" << ledger.requested_negative << '\n';
  out << "flags insufficient=" << (ledger.insufficient ? 1 : 0)
      << " negative_fallback=" << (ledger.negative_fallback ? 1 : 0) << '\n';
  out << "baseline " << ledger.baseline.size() << '\n';
  for (const auto& m : ledger.mutations) {
    out << "mutation t=" << m.t << " vertex=" << quote_value(m.vertex) << " attr=" << quote_value(m.attr)
        << " value=" << quote_value(m.value) << " restored=" << quote_value(m.restored)
        << " kind=" << (m.positive ? "positive" : "negative") << '\n';
  }
  for (const auto& v : ledger.sampled_positive) out << "sampled " << format_violation(v, rules, g) << '\n';
  for (const auto& v : ledger.gamma_plus) out << "gamma+ " << format_violation(v, rules, g) << '\n';
  for (const auto& v : ledger.gamma_minus) out << "gamma- " << format_violation(v, rules, g) << '\n';
}

}  // namespace tgfd
