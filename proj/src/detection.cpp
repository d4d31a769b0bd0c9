#include "tgfd/detection.hpp"

#include <algorithm>
#include <stdexcept>

namespace tgfd {

std::vector<Timestamp> permissible_range(Timestamp i, Delta d, Timestamp T) {
  std::vector<Timestamp> out;
  for (Timestamp j = 1; j <= T; ++j) {
    if (d.contains(std::abs(j - i))) out.push_back(j);
  }
  return out;
}

const std::string& violation_tgfd(const Violation& v) {
  return std::visit([](const auto& x) -> const std::string& { return x.tgfd; }, v);
}

std::vector<ConstantLiteral> gating_constants(const Tgfd& rule) {
  std::vector<ConstantLiteral> out;
  for (const auto& l : rule.x)
    if (auto* c = std::get_if<ConstantLiteral>(&l)) out.push_back(*c);
  return out;
}

IncTed::IncTed(Tgfd rule, Timestamp T, PairScope scope) : rule_(std::move(rule)), T_(T), scope_(scope) {
  if (rule_.y.size() != 1) throw std::invalid_argument("IncTed needs a normalized rule: " + rule_.name);
  for (const auto& l : rule_.x) {
    if (auto* c = std::get_if<ConstantLiteral>(&l)) {
      x_const_.emplace_back(term(c->ref), c->value);
    } else {
      const auto& v = std::get<VariableLiteral>(l);
      if (v.self_form())
        x_self_.push_back(term(v.left));
      else
        x_cross_.emplace_back(term(v.left), term(v.right));
    }
  }
  const Literal& y = *rule_.y.begin();
  y_text_ = to_string(y);
  if (auto* c = std::get_if<ConstantLiteral>(&y)) {
    y_kind_ = YKind::kConstant;
    y_left_ = y_right_ = term(c->ref);
    y_value_ = c->value;
  } else {
    const auto& v = std::get<VariableLiteral>(y);
    y_left_ = term(v.left);
    y_right_ = term(v.right);
    y_kind_ = v.self_form() ? YKind::kSelf : YKind::kCross;
  }
  hashable_ = x_cross_.empty() && y_kind_ != YKind::kCross;
}

int IncTed::term(const AttrRef& r) {
  auto it = std::find(terms_.begin(), terms_.end(), r);
  if (it != terms_.end()) return static_cast<int>(it - terms_.begin());
  terms_.push_back(r);
  return static_cast<int>(terms_.size()) - 1;
}

bool IncTed::before(const Inst& a, const Inst& b) const { return std::tie(a.t, a.b) < std::tie(b.t, b.b); }

bool IncTed::x_cross_ok(const Inst& first, const Inst& second) const {
  for (auto [l, r] : x_cross_) {
    const auto& a = first.vals[static_cast<std::size_t>(l)];
    const auto& b = second.vals[static_cast<std::size_t>(r)];
    if (!a || !b || *a != *b) return false;
  }
  return true;
}

bool IncTed::y_pair_ok(const Inst& first, const Inst& second) const {
  const auto& a = first.vals[static_cast<std::size_t>(y_left_)];
  const auto& b = second.vals[static_cast<std::size_t>(y_right_)];
  if (y_kind_ == YKind::kConstant) return !first.y_fail && !second.y_fail;
  return a && b && *a == *b;
}

bool IncTed::in_scope(const Inst& a, const Inst& b) const {
  return scope_ == PairScope::kAll || a.origin != b.origin;
}

template <class F>
void IncTed::for_window(const TimeMap& m, Timestamp t, F&& f) const {
  auto scan = [&](Timestamp lo, Timestamp hi) {
    lo = std::max(lo, 1);
    hi = std::min(hi, T_);
    for (auto it = m.lower_bound(lo); it != m.end() && it->first <= hi; ++it)
      for (int id : it->second) f(id);
  };
  const Delta& d = rule_.delta;
  if (d.p == 0) {
    scan(t - d.q, t + d.q);
  } else {
    scan(t - d.q, t - d.p);
    scan(t + d.p, t + d.q);
  }
}

void IncTed::emit_pair(const Inst& a, const Inst& b, std::vector<Violation>& out) const {
  const Inst& first = before(a, b) ? a : b;
  const Inst& second = before(a, b) ? b : a;
  out.push_back(PairViolation{rule_.name, first.t, first.b, second.t, second.b});
}

void IncTed::emit_const(Inst& a, std::vector<Violation>& out) {
  if (a.emitted) return;
  a.emitted = true;
  out.push_back(ConstantViolation{rule_.name, a.t, a.b, y_text_});
}

void IncTed::validated(const Inst& a, const Inst& b) {
  nontrivial_ = true;
  if (!record_) return;
  const Inst& first = before(a, b) ? a : b;
  const Inst& second = before(a, b) ? b : a;
  validated_.emplace_back(MatchRef{first.origin, first.t, first.b}, MatchRef{second.origin, second.t, second.b});
}

std::vector<Violation> IncTed::step(Timestamp t, const std::vector<Binding>& matches, const Snapshot& s, int origin) {
  std::vector<Violation> out;
  std::vector<Symbol> attr_syms;
  std::vector<int> var_of;
  for (const auto& r : terms_) {
    attr_syms.push_back(s.symbols().find(r.attr));
    var_of.push_back(rule_.pattern.var_index(r.var));
  }
  for (const Binding& b : matches) {
    Inst h;
    h.b = b;
    h.t = t;
    h.origin = origin;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const std::string* v =
          attr_syms[i] == kNoSymbol ? nullptr : s.attr(b[static_cast<std::size_t>(var_of[i])], attr_syms[i]);
      h.vals.push_back(v ? std::optional<std::string>(*v) : std::nullopt);
    }
    // A match failing a constant of X, or lacking a self-compared attribute,
    // can never satisfy X with anyone.
    bool x_ok = true;
    for (const auto& [ti, c] : x_const_) x_ok = x_ok && h.vals[static_cast<std::size_t>(ti)] == c;
    for (int ti : x_self_) x_ok = x_ok && h.vals[static_cast<std::size_t>(ti)].has_value();
    if (!x_ok) continue;
    XKey key;
    for (int ti : x_self_) key.push_back(*h.vals[static_cast<std::size_t>(ti)]);
    if (y_kind_ == YKind::kConstant) h.y_fail = h.vals[static_cast<std::size_t>(y_left_)] != y_value_;

    int id = static_cast<int>(insts_.size());
    insts_.push_back(std::move(h));
    Inst& me = insts_.back();
    Part& part = parts_[key];

    if (y_kind_ != YKind::kConstant) {
      // A match is its own partner when 0 is in the interval.
      if (rule_.delta.p == 0 && scope_ == PairScope::kAll && x_cross_ok(me, me) && !y_pair_ok(me, me)) {
        emit_pair(me, me, out);
      }
      if (hashable_) {
        const auto& my_y = me.vals[static_cast<std::size_t>(y_left_)];
        for (const auto& [yv, tm] : part.by_y) {
          bool agree = yv && my_y && *yv == *my_y;
          if (agree) continue;
          for_window(tm, t, [&](int o) {
            if (in_scope(me, insts_[static_cast<std::size_t>(o)])) emit_pair(me, insts_[static_cast<std::size_t>(o)], out);
          });
        }
        for_window(part.by_time, t, [&](int o) {
          if (in_scope(me, insts_[static_cast<std::size_t>(o)])) validated(me, insts_[static_cast<std::size_t>(o)]);
        });
      } else {
        for_window(part.by_time, t, [&](int o) {
          const Inst& other = insts_[static_cast<std::size_t>(o)];
          if (!in_scope(me, other)) return;
          const Inst& first = before(me, other) ? me : other;
          const Inst& second = before(me, other) ? other : me;
          if (!x_cross_ok(first, second)) return;
          validated(first, second);
          if (!y_pair_ok(first, second)) emit_pair(me, other, out);
        });
      }
    } else {
      bool partner = false;
      if (hashable_) {
        std::vector<int> fired;
        for_window(part.by_time, t, [&](int o) {
          if (!in_scope(me, insts_[static_cast<std::size_t>(o)])) return;
          partner = true;
          validated(me, insts_[static_cast<std::size_t>(o)]);
        });
        for_window(part.pending_fail, t, [&](int o) {
          if (in_scope(me, insts_[static_cast<std::size_t>(o)])) fired.push_back(o);
        });
        for (int o : fired) {
          emit_const(insts_[static_cast<std::size_t>(o)], out);
          auto& bucket = part.pending_fail[insts_[static_cast<std::size_t>(o)].t];
          bucket.erase(std::find(bucket.begin(), bucket.end(), o));
        }
        if (rule_.delta.p == 0 && scope_ == PairScope::kAll) partner = true;
      } else {
        for_window(part.by_time, t, [&](int o) {
          Inst& other = insts_[static_cast<std::size_t>(o)];
          if (!in_scope(me, other)) return;
          const Inst& first = before(me, other) ? me : other;
          const Inst& second = before(me, other) ? other : me;
          if (!x_cross_ok(first, second)) return;
          validated(first, second);
          partner = true;
          if (other.y_fail) emit_const(other, out);
        });
        if (rule_.delta.p == 0 && scope_ == PairScope::kAll && x_cross_ok(me, me)) partner = true;
      }
      if (me.y_fail && partner) emit_const(me, out);
      if (me.y_fail && !me.emitted && hashable_) part.pending_fail[t].push_back(id);
    }
    part.by_time[t].push_back(id);
    part.by_y[insts_[static_cast<std::size_t>(id)].vals[static_cast<std::size_t>(y_left_)]][t].push_back(id);
  }
  return out;
}

std::vector<IncTed::XKey> IncTed::partitions() const {
  std::vector<XKey> out;
  for (const auto& [k, p] : parts_) out.push_back(k);
  return out;
}

std::vector<Timestamp> IncTed::gamma_x(const XKey& key) const {
  std::vector<Timestamp> out;
  auto it = parts_.find(key);
  if (it == parts_.end()) return out;
  for (const auto& [t, ids] : it->second.by_time) out.insert(out.end(), ids.size(), t);
  return out;
}

std::vector<Timestamp> IncTed::gamma_xy(const XKey& key, const std::optional<std::string>& y) const {
  std::vector<Timestamp> out;
  auto it = parts_.find(key);
  if (it == parts_.end()) return out;
  auto jt = it->second.by_y.find(y);
  if (jt == it->second.by_y.end()) return out;
  for (const auto& [t, ids] : jt->second) out.insert(out.end(), ids.size(), t);
  return out;
}

DetectionResult detect_sequential(const TemporalGraph& g, const std::vector<Tgfd>& rules) {
  std::vector<Tgfd> norm = normalize(rules);
  DetectionResult result;
  std::vector<IncrementalMatcher> matchers;
  std::vector<IncTed> engines;
  for (const auto& r : norm) {
    matchers.emplace_back(r.pattern, gating_constants(r));
    engines.emplace_back(r, g.T());
  }
  Snapshot view = g.snapshot(1);
  for (std::size_t i = 0; i < norm.size(); ++i) {
    matchers[i].initialize(view);
    auto v = engines[i].step(1, matchers[i].matches(), g.snapshot(1));
    result.violations.insert(result.violations.end(), v.begin(), v.end());
  }
  for (Timestamp t = 2; t <= g.T(); ++t) {
    view.set_t(t);
    for (const GraphDelta& d : g.deltas(t)) {
      view.apply(d);
      for (auto& m : matchers) m.apply(d, view);
    }
    for (std::size_t i = 0; i < norm.size(); ++i) {
      auto v = engines[i].step(t, matchers[i].matches(), g.snapshot(t));
      result.violations.insert(result.violations.end(), v.begin(), v.end());
    }
  }
  std::sort(result.violations.begin(), result.violations.end());
  result.violations.erase(std::unique(result.violations.begin(), result.violations.end()), result.violations.end());
  for (std::size_t i = 0; i < norm.size(); ++i) {
    result.stats.push_back(
        {norm[i].name, engines[i].nontrivial(), engines[i].indexed(), matchers[i].isomorphism_searches()});
  }
  return result;
}

}  // namespace tgfd
