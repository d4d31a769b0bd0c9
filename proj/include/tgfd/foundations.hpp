#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tgfd/model.hpp"

namespace tgfd {

struct Interval {
  int lo = 0;
  int hi = 0;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

// Disjoint, non-adjacent integer intervals kept sorted. Gaps are integers,
// so (0,2) and (3,4) merge into (0,4).
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> ivs) {
    for (auto iv : ivs) add(iv);
  }

  void add(Interval iv);
  bool contains(int x) const;
  bool contains(Interval iv) const;
  bool empty() const { return ivs_.empty(); }
  const std::vector<Interval>& intervals() const { return ivs_; }
  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> ivs_;
};

std::optional<Interval> intersect(Interval a, Interval b);

// Injective maps from small's nodes to big's nodes that keep node labels
// (a wildcard in small maps anywhere, a labeled node never maps onto a
// wildcard) and send every small edge to a big edge with the same label.
// Entry i is the big node for small node i.
std::vector<std::vector<int>> find_embeddings(const GraphPattern& small, const GraphPattern& big);
std::optional<std::vector<int>> find_embedding(const GraphPattern& small, const GraphPattern& big);

Literal rename(const Literal& l, const GraphPattern& from, const std::vector<int>& f, const GraphPattern& to);
std::set<Literal> rename(const std::set<Literal>& ls, const GraphPattern& from, const std::vector<int>& f,
                         const GraphPattern& to);

struct ClosureEntry {
  Literal literal;
  IntervalSet valid;
};

// Literals of q's variables derivable from the seeds (holding on seed_on) and
// the rules in sigma embedded into q. Only literals mentioned by the seeds or
// the embedded rules are listed.
std::vector<ClosureEntry> closure(const GraphPattern& q, const std::set<Literal>& seeds, Interval seed_on,
                                  const std::vector<Tgfd>& sigma);

struct ImplicationResult {
  bool implied = false;
  IntervalSet derivable;  // gaps where phi's consequent is derivable
};

ImplicationResult check_implication(const std::vector<Tgfd>& sigma, const Tgfd& phi);

struct SatWitness {
  std::string anchor;  // rule whose pattern and antecedent were seeded
  Literal first;
  Literal second;
  Interval gaps;
};

struct SatResult {
  bool satisfiable = true;
  std::optional<SatWitness> witness;
};

// Unsatisfiable when, for some rule's pattern with that rule's antecedent
// seeded on its interval, the embedded rules force one attribute to two
// different constants at some gap.
SatResult check_satisfiability(const std::vector<Tgfd>& sigma);

enum class Axiom {
  kReflexivity = 1,
  kLiteralAugmentation,
  kPatternAugmentation,
  kTransitivity,
  kDecomposition,
  kIntervalIntersection,
  kIntervalContainment,
};

std::size_t axiom_arity(Axiom a);

// Whether conclusion follows from premises by one application of the axiom.
// Throws ArityMismatch on a wrong premise count.
bool axiom_check(Axiom a, const std::vector<Tgfd>& premises, const Tgfd& conclusion);

}  // namespace tgfd
