#include <gtest/gtest.h>

#include "helpers.hpp"
#include "tgfd/error.hpp"
#include "tgfd/foundations.hpp"
#include "tgfd/tgfd_parser.hpp"

using namespace tgfd;
using testutil::kFixtures;

namespace {

Tgfd rule(const std::string& text) { return parse_tgfds(text).at(0); }

const char* kPair = "tgfd %s\nvertex x t\nvertex y u\nedge x l y\ndelta (%d, %d)\nx: %s\ny: %s\n";

Tgfd pair_rule(const std::string& name, int p, int q, const std::string& x, const std::string& y) {
  char buf[512];
  std::snprintf(buf, sizeof buf, kPair, name.c_str(), p, q, x.c_str(), y.c_str());
  return rule(buf);
}

}  // namespace

TEST(IntervalSet, MergesOverlapAndAdjacency) {
  IntervalSet s{{0, 2}, {1, 4}};
  ASSERT_EQ(s.intervals().size(), 1u);
  EXPECT_EQ(s.intervals()[0], (Interval{0, 4}));
  IntervalSet adj{{0, 2}, {3, 5}};
  EXPECT_EQ(adj, (IntervalSet{{0, 5}}));
  IntervalSet gap{{0, 2}, {4, 5}};
  EXPECT_EQ(gap.intervals().size(), 2u);
  EXPECT_TRUE(gap.contains(5));
  EXPECT_FALSE(gap.contains(3));
  EXPECT_TRUE(gap.contains(Interval{4, 5}));
  EXPECT_FALSE(gap.contains(Interval{1, 4}));
  gap.add({3, 3});
  EXPECT_EQ(gap, (IntervalSet{{0, 5}}));
}

TEST(IntervalSet, Intersect) {
  EXPECT_EQ(intersect({0, 4}, {2, 7}), (Interval{2, 4}));
  EXPECT_FALSE(intersect({0, 1}, {2, 3}).has_value());
}

TEST(Embedding, FindsAllInjectiveMaps) {
  GraphPattern small;
  small.add_node("a", "t");
  small.add_node("b", kWildcard);
  small.add_edge("a", "l", "b");
  GraphPattern big;
  big.add_node("p", "t");
  big.add_node("q", "t");
  big.add_node("r", "u");
  big.add_edge("p", "l", "q");
  big.add_edge("q", "l", "r");
  big.add_edge("p", "m", "r");
  auto all = find_embeddings(small, big);
  EXPECT_EQ(all.size(), 2u);
  // A labeled node never maps onto a wildcard.
  EXPECT_TRUE(find_embeddings(big, small).empty());
  GraphPattern w;
  w.add_node("a", kWildcard);
  GraphPattern t;
  t.add_node("a", "t");
  EXPECT_FALSE(find_embedding(t, w).has_value());
  EXPECT_TRUE(find_embedding(w, t).has_value());
}

TEST(Embedding, RenameFollowsMap) {
  GraphPattern small;
  small.add_node("a", "t");
  GraphPattern big;
  big.add_node("z", "u");
  big.add_node("y", "t");
  auto f = find_embedding(small, big);
  ASSERT_TRUE(f);
  Literal l = ConstantLiteral{{"a", "k"}, "v"};
  EXPECT_EQ(rename(l, small, *f, big), Literal(ConstantLiteral{{"y", "k"}, "v"}));
}

TEST(Closure, ChainsThroughUnionFind) {
  auto r1 = pair_rule("r1", 0, 5, "x.a == x.a", "y.b == y.b");
  auto r2 = pair_rule("r2", 2, 8, "y.b == y.b", "y.c = \"k\"");
  auto cl = closure(r1.pattern, r1.x, {0, 6}, {r1, r2});
  bool found = false;
  for (const auto& e : cl) {
    if (e.literal == Literal(ConstantLiteral{{"y", "c"}, "k"})) {
      found = true;
      EXPECT_EQ(e.valid, (IntervalSet{{2, 5}}));
    }
  }
  EXPECT_TRUE(found);
}

TEST(Implication, Transitive) {
  auto r1 = pair_rule("r1", 0, 5, "x.a == x.a", "y.b == y.b");
  auto r2 = pair_rule("r2", 0, 5, "y.b == y.b", "y.c == y.c");
  auto phi = pair_rule("phi", 1, 4, "x.a == x.a", "y.c == y.c");
  EXPECT_TRUE(check_implication({r1, r2}, phi).implied);
  auto wide = pair_rule("phi", 1, 6, "x.a == x.a", "y.c == y.c");
  auto res = check_implication({r1, r2}, wide);
  EXPECT_FALSE(res.implied);
  EXPECT_EQ(res.derivable, (IntervalSet{{1, 5}}));
}

TEST(Implication, VariableEqualityThroughConstants) {
  // x.a = "k" and y.b = "k" make x.a == y.b.
  auto phi = pair_rule("phi", 0, 2, "x.a = \"k\"; y.b = \"k\"", "x.a == y.b");
  EXPECT_TRUE(check_implication({}, phi).implied);
  auto other = pair_rule("phi", 0, 2, "x.a = \"k\"; y.b = \"j\"", "x.a == y.b");
  EXPECT_FALSE(check_implication({}, other).implied);
}

TEST(Implication, PatternMustEmbed) {
  auto r = pair_rule("r", 0, 3, "", "y.b == y.b");
  auto phi = rule("tgfd phi\nvertex x t\ndelta (0, 3)\ny: x.b == x.b\n");
  EXPECT_FALSE(check_implication({r}, phi).implied);
}

TEST(Satisfiability, ConflictFixture) {
  auto res = check_satisfiability(normalize(load_tgfds(kFixtures + "/conflict/rules.tgfd")));
  ASSERT_FALSE(res.satisfiable);
  ASSERT_TRUE(res.witness);
  EXPECT_EQ(res.witness->anchor, "sigma_prime");
  std::set<std::string> lits{to_string(res.witness->first), to_string(res.witness->second)};
  EXPECT_EQ(lits, (std::set<std::string>{"w.val=\"100mg\"", "w.val=\"20mL\""}));
  EXPECT_EQ(res.witness->gaps, (Interval{30, 120}));
  EXPECT_TRUE(check_satisfiability(normalize(load_tgfds(kFixtures + "/conflict/disjoint.tgfd"))).satisfiable);
}

TEST(Satisfiability, PartialOverlapNarrowsWitness) {
  auto a = pair_rule("a", 0, 5, "x.a == x.a", "y.b = \"1\"");
  auto b = pair_rule("b", 3, 9, "x.a == x.a", "y.b = \"2\"");
  auto res = check_satisfiability({a, b});
  ASSERT_FALSE(res.satisfiable);
  EXPECT_EQ(res.witness->gaps, (Interval{3, 5}));
  b.delta = {6, 9};
  EXPECT_TRUE(check_satisfiability({a, b}).satisfiable);
}

TEST(Satisfiability, SingleRuleSelfConflict) {
  auto r = pair_rule("r", 0, 2, "y.b = \"1\"", "y.b = \"2\"");
  EXPECT_FALSE(check_satisfiability({r}).satisfiable);
  EXPECT_TRUE(check_satisfiability({}).satisfiable);
}

TEST(Axioms, ArityAndRejections) {
  auto base = pair_rule("p", 0, 4, "x.a == x.a", "y.b == y.b");
  EXPECT_EQ(axiom_arity(Axiom::kReflexivity), 0u);
  EXPECT_EQ(axiom_arity(Axiom::kTransitivity), 2u);
  EXPECT_EQ(axiom_arity(Axiom::kIntervalIntersection), 2u);
  EXPECT_THROW(axiom_check(Axiom::kDecomposition, {}, base), ArityMismatch);
  EXPECT_THROW(axiom_check(Axiom::kReflexivity, {base}, base), ArityMismatch);

  EXPECT_FALSE(axiom_check(Axiom::kReflexivity, {}, base));
  auto narrower = base;
  narrower.delta = {0, 5};
  EXPECT_FALSE(axiom_check(Axiom::kIntervalContainment, {base}, narrower));
  EXPECT_TRUE(axiom_check(Axiom::kIntervalContainment, {narrower}, base));
  auto fewer = base;
  fewer.x.clear();
  EXPECT_FALSE(axiom_check(Axiom::kLiteralAugmentation, {base}, fewer));
  EXPECT_TRUE(axiom_check(Axiom::kLiteralAugmentation, {fewer}, base));
  auto p1 = base, p2 = base, c = base;
  p1.delta = {0, 3};
  p2.delta = {2, 6};
  c.delta = {2, 3};
  EXPECT_TRUE(axiom_check(Axiom::kIntervalIntersection, {p1, p2}, c));
  c.delta = {2, 4};
  EXPECT_FALSE(axiom_check(Axiom::kIntervalIntersection, {p1, p2}, c));
}
