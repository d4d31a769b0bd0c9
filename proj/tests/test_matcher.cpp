#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "instances.hpp"
#include "oracles.hpp"
#include "tgfd/detection.hpp"
#include "tgfd/matcher.hpp"
#include "tgfd/tgfd_parser.hpp"

using namespace tgfd;
using testutil::graph;
using testutil::vid;

namespace {

GraphPattern advising() {
  GraphPattern q;
  q.add_node("a", "advisor");
  q.add_node("s", "student");
  q.add_node("z", "university");
  q.add_node("d", "department");
  q.add_edge("a", "supervise", "s");
  q.add_edge("s", "study", "z");
  q.add_edge("d", "part_of", "z");
  return q;
}

}  // namespace

TEST(Decompose, CoversEveryEdge) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::mt19937_64 rng(seed);
    testgen::Shape shape;
    shape.max_edges = 5;
    auto q = testgen::random_pattern(rng, shape);
    auto paths = decompose(q);
    std::multiset<int> seen;
    for (const auto& p : paths) {
      ASSERT_EQ(p.vars.size(), p.edges.size() + 1);
      for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const auto& e = q.edges()[static_cast<std::size_t>(p.edges[i])];
        EXPECT_EQ(e.src, p.vars[i]);
        EXPECT_EQ(e.dst, p.vars[i + 1]);
      }
      seen.insert(p.edges.begin(), p.edges.end());
    }
    for (std::size_t e = 0; e < q.edges().size(); ++e) EXPECT_GE(seen.count(static_cast<int>(e)), 1u);
    if (q.edges().empty()) EXPECT_EQ(paths.size(), 1u);
  }
}

TEST(Decompose, AttachesConstantsToPaths) {
  auto q = advising();
  ConstantLiteral mc{{"z", "name"}, "McMaster"};
  auto paths = decompose(q, {mc});
  ASSERT_EQ(paths.size(), 2u);
  for (const auto& p : paths) {
    EXPECT_TRUE(p.has_var(q.var_index("z")));
    ASSERT_EQ(p.literals.size(), 1u);
    EXPECT_EQ(p.literals[0], mc);
  }
}

TEST(MatchSnapshot, AgreesWithBruteForce) {
  testgen::Shape shape;
  shape.max_edges = 4;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto inst = testgen::random_instance(seed, shape);
    for (const auto& r : inst.rules) {
      for (Timestamp t = 1; t <= inst.graph.T(); ++t) {
        EXPECT_EQ(match_snapshot(r.pattern, inst.graph.snapshot(t)), oracle::matches(r.pattern, inst.graph.snapshot(t)))
            << "seed " << seed;
      }
    }
  }
}

TEST(MatchSnapshot, InjectiveAndTyped) {
  auto g = graph("v a t\nv b t\nv c u\ne a l b\ne b l a\ne a l c\n");
  GraphPattern q;
  q.add_node("x", "t");
  q.add_node("y", "t");
  q.add_edge("x", "l", "y");
  EXPECT_EQ(match_snapshot(q, g.snapshot(1)).size(), 2u);
  GraphPattern w;
  w.add_node("x", "t");
  w.add_node("y", kWildcard);
  w.add_edge("x", "l", "y");
  EXPECT_EQ(match_snapshot(w, g.snapshot(1)).size(), 3u);
  GraphPattern unknown;
  unknown.add_node("x", "t");
  unknown.add_node("y", "t");
  unknown.add_edge("x", "never_seen", "y");
  EXPECT_TRUE(match_snapshot(unknown, g.snapshot(1)).empty());
}

TEST(MatchSnapshot, AnchorFilter) {
  auto g = graph("v a t\nv b t\nv c t\ne a l b\ne b l c\n");
  GraphPattern q;
  q.add_node("x", "t");
  q.add_node("y", "t");
  q.add_edge("x", "l", "y");
  AnchorFilter f{0, std::vector<bool>(g.vertex_count(), false)};
  f.allowed[vid(g, "b")] = true;
  auto m = match_snapshot(q, g.snapshot(1), &f);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0][0], vid(g, "b"));
}

// A student's study edge arrives at t2 and the university is renamed at t3.
TEST(IncrementalMatcher, StudentExample) {
  auto g = graph(R"(
v alice advisor name=Alice
v bob student name=Bob
v uw university name=Waterloo
v cs department name=CS
e alice supervise bob
e cs part_of uw
)",
                 "t 2\n+e bob study uw\nt 3\n+a uw name=McMaster\n+a cs name=Computing\n");
  auto q = advising();
  ConstantLiteral mc{{"z", "name"}, "McMaster"};
  IncrementalMatcher m(q, {mc});

  Snapshot view = g.snapshot(1);
  m.initialize(view);
  EXPECT_TRUE(m.matches().empty());
  EXPECT_TRUE(m.states().empty());

  auto advance = [&](Timestamp t) {
    view.set_t(t);
    for (const auto& d : g.deltas(t)) {
      view.apply(d);
      m.apply(d, view);
    }
  };

  advance(2);
  ASSERT_EQ(m.states().size(), 1u);
  const auto& st = m.states().begin()->second;
  EXPECT_EQ(st.candidate[static_cast<std::size_t>(q.var_index("s"))], vid(g, "bob"));
  EXPECT_FALSE(st.complete());
  for (std::size_t k = 0; k < m.paths().size(); ++k) {
    EXPECT_TRUE(st.topological(k));
    EXPECT_FALSE(st.beta[k]);
    ASSERT_EQ(st.unsat[k].size(), 1u);
    EXPECT_EQ(st.unsat[k][0], mc);
  }
  EXPECT_TRUE(m.matches().empty());
  std::size_t searches = m.isomorphism_searches();
  EXPECT_GE(searches, 1u);

  advance(3);
  ASSERT_EQ(m.matches().size(), 1u);
  const auto& done = m.states().begin()->second;
  EXPECT_TRUE(done.complete());
  for (std::size_t k = 0; k < m.paths().size(); ++k) {
    EXPECT_TRUE(done.beta[k]);
    EXPECT_TRUE(done.unsat[k].empty());
  }
  EXPECT_EQ(m.isomorphism_searches(), searches);
}

TEST(IncrementalMatcher, DeletesDemoteWithoutSearch) {
  auto g = graph("v a t\nv b t\nv c t\ne a l b\ne b l c\n", "t 2\n-e a l b\nt 3\n+e a l b\n");
  GraphPattern q;
  q.add_node("x", "t");
  q.add_node("y", "t");
  q.add_node("z", "t");
  q.add_edge("x", "l", "y");
  q.add_edge("y", "l", "z");
  IncrementalMatcher m(q, {});
  Snapshot view = g.snapshot(1);
  m.initialize(view);
  EXPECT_EQ(m.matches().size(), 1u);
  for (Timestamp t = 2; t <= 3; ++t) {
    view.set_t(t);
    for (const auto& d : g.deltas(t)) {
      view.apply(d);
      auto delta = m.apply(d, view);
      if (t == 2) {
        EXPECT_EQ(delta.removed.size(), 1u);
        EXPECT_EQ(m.isomorphism_searches(), 0u);
      } else {
        EXPECT_EQ(delta.added.size(), 1u);
      }
    }
  }
  EXPECT_EQ(m.matches().size(), 1u);
  EXPECT_EQ(m.isomorphism_searches(), 1u);
}

TEST(IncrementalMatcher, IrrelevantInsertsDoNotSearch) {
  auto g = graph("v a t\nv b t\nv c u\n", "t 2\n+e a other b\n+e a l c\n");
  GraphPattern q;
  q.add_node("x", "t");
  q.add_node("y", "t");
  q.add_edge("x", "l", "y");
  IncrementalMatcher m(q, {});
  Snapshot view = g.snapshot(1);
  m.initialize(view);
  view.set_t(2);
  for (const auto& d : g.deltas(2)) {
    view.apply(d);
    m.apply(d, view);
  }
  EXPECT_EQ(m.isomorphism_searches(), 0u);
}
