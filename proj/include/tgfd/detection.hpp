#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tgfd/matcher.hpp"
#include "tgfd/model.hpp"
#include "tgfd/temporal_graph.hpp"

namespace tgfd {

// {j in [1,T] : p <= |j - i| <= q}, ascending.
std::vector<Timestamp> permissible_range(Timestamp i, Delta d, Timestamp T);

// (t_i, b_i) < (t_j, b_j) lexicographically.
struct PairViolation {
  std::string tgfd;
  Timestamp t_i = 0;
  Binding b_i;
  Timestamp t_j = 0;
  Binding b_j;
  friend auto operator<=>(const PairViolation&, const PairViolation&) = default;
};

// A match failing a constant consequent while some partner within the
// interval satisfies the antecedent with it.
struct ConstantViolation {
  std::string tgfd;
  Timestamp t = 0;
  Binding b;
  std::string failed;  // the Y literal, as text
  friend auto operator<=>(const ConstantViolation&, const ConstantViolation&) = default;
};

using Violation = std::variant<PairViolation, ConstantViolation>;

const std::string& violation_tgfd(const Violation& v);

// Constants in X; these gate the matcher.
std::vector<ConstantLiteral> gating_constants(const Tgfd& rule);

enum class PairScope { kAll, kCrossOrigin };

struct MatchRef {
  int origin = 0;
  Timestamp t = 0;
  Binding b;
  friend auto operator<=>(const MatchRef&, const MatchRef&) = default;
};

// Incremental pair detection for one normalized rule. Matches are fed one
// timestamp at a time; each match is paired with indexed matches in its
// permissible range, so every unordered pair is examined exactly once.
// With kCrossOrigin only pairs whose members came from different origins
// are examined.
class IncTed {
 public:
  using XKey = std::vector<std::string>;

  IncTed(Tgfd rule, Timestamp T, PairScope scope = PairScope::kAll);

  // s is the snapshot the matches were found in (used for attribute values).
  std::vector<Violation> step(Timestamp t, const std::vector<Binding>& matches, const Snapshot& s, int origin = 0);

  const Tgfd& rule() const { return rule_; }
  bool nontrivial() const { return nontrivial_; }
  std::size_t indexed() const { return insts_.size(); }

  void record_validated_pairs(bool on) { record_ = on; }
  // X-satisfying pairs examined, oriented (earlier first).
  const std::vector<std::pair<MatchRef, MatchRef>>& validated_pairs() const { return validated_; }

  // Introspection of the partition index.
  std::vector<XKey> partitions() const;
  std::vector<Timestamp> gamma_x(const XKey& key) const;
  std::vector<Timestamp> gamma_xy(const XKey& key, const std::optional<std::string>& y) const;

 private:
  struct Inst {
    Binding b;
    Timestamp t = 0;
    int origin = 0;
    std::vector<std::optional<std::string>> vals;
    bool y_fail = false;
    bool emitted = false;
  };
  using TimeMap = std::map<Timestamp, std::vector<int>>;
  struct Part {
    TimeMap by_time;
    std::map<std::optional<std::string>, TimeMap> by_y;
    TimeMap pending_fail;
  };
  enum class YKind { kConstant, kSelf, kCross };

  int term(const AttrRef& r);
  bool before(const Inst& a, const Inst& b) const;
  bool x_cross_ok(const Inst& first, const Inst& second) const;
  bool y_pair_ok(const Inst& first, const Inst& second) const;
  bool in_scope(const Inst& a, const Inst& b) const;
  template <class F>
  void for_window(const TimeMap& m, Timestamp t, F&& f) const;
  void emit_pair(const Inst& a, const Inst& b, std::vector<Violation>& out) const;
  void emit_const(Inst& a, std::vector<Violation>& out);
  void validated(const Inst& a, const Inst& b);

  Tgfd rule_;
  Timestamp T_;
  PairScope scope_;
  bool record_ = false;
  bool nontrivial_ = false;

  std::vector<AttrRef> terms_;
  std::vector<std::pair<int, std::string>> x_const_;
  std::vector<int> x_self_;
  std::vector<std::pair<int, int>> x_cross_;
  YKind y_kind_ = YKind::kSelf;
  int y_left_ = 0, y_right_ = 0;
  std::string y_value_;
  std::string y_text_;
  bool hashable_ = true;

  std::vector<Inst> insts_;
  std::map<XKey, Part> parts_;
  std::vector<std::pair<MatchRef, MatchRef>> validated_;
};

struct RuleStats {
  std::string tgfd;
  bool nontrivial = false;
  std::size_t matches = 0;             // match instances indexed
  std::size_t isomorphism_searches = 0;  // incremental searches after t=1
};

struct DetectionResult {
  std::vector<Violation> violations;  // sorted, unique
  std::vector<RuleStats> stats;
};

// Full match at t=1, incremental matching afterwards, IncTED per timestamp.
// Rules are normalized first.
DetectionResult detect_sequential(const TemporalGraph& g, const std::vector<Tgfd>& rules);

}  // namespace tgfd
