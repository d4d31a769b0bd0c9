// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "oracles.hpp"
#include "tgfd/detection.hpp"
#include "tgfd/error.hpp"
#include "tgfd/evaluation.hpp"
#include "tgfd/foundations.hpp"
#include "tgfd/graph_io.hpp"
#include "tgfd/matcher.hpp"
#include "tgfd/parallel.hpp"
#include "tgfd/tgfd_parser.hpp"
#include "tgfd/workload.hpp"

#ifndef TGFD_FIXTURES
#define TGFD_FIXTURES "tests/fixtures"
#endif

namespace {

using namespace tgfd;
using Clock = std::chrono::steady_clock;

const std::string kFixtures = TGFD_FIXTURES;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// 1
Outcome pairwise_oracle() {
  Outcome o;
  testgen::Shape shape;
  shape.min_vertices = 30;
  shape.max_vertices = 200;
  shape.max_T = 10;
  shape.max_rules = 5;
  shape.max_edges = 4;
  auto t0 = Clock::now();
  std::size_t total = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto inst = testgen::random_instance(seed, shape);
    auto got = detect_sequential(inst.graph, inst.rules).violations;
    auto want = oracle::pairwise(inst.graph, inst.rules);
    total += want.size();
    if (got != want) fail(o, "seed " + std::to_string(seed) + ": " + std::to_string(got.size()) + " detected vs " +
                                 std::to_string(want.size()) + " expected");
  }
  double secs = seconds_since(t0);
  if (secs >= 60) fail(o, "took " + fmt(secs) + " s");
  if (o.pass) o.detail = "100 instances, " + std::to_string(total) + " violations, " + fmt(secs) + " s";
  return o;
}

// 2
Outcome parallel_equivalence() {
  Outcome o;
  testgen::Shape shape;
  shape.max_vertices = 100;
  shape.max_T = 8;
  shape.max_rules = 4;
  std::size_t runs = 0, rebalanced = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto inst = testgen::random_instance(seed + 1000, shape);
    auto want = detect_sequential(inst.graph, inst.rules).violations;
    for (int n : {1, 2, 4, 8}) {
      ParallelOptions opts;
      opts.workers = n;
      opts.seed = seed;
      if (seed % 2 == 0) {
        // Unbalanced random fragmentation.
        std::mt19937_64 rng(seed * 31 + static_cast<std::uint64_t>(n));
        opts.partition.resize(inst.graph.vertex_count());
        for (auto& w : opts.partition) w = std::uniform_int_distribution<int>(0, n - 1)(rng);
      }
      Timestamp mid = inst.graph.T() / 2;
      if (mid >= 1 && mid < inst.graph.T()) opts.force_rebalance_at.insert(mid);
      auto rep = run_parallel(inst.graph, inst.rules, opts);
      ++runs;
      rebalanced += rep.rebalances.empty() ? 0 : 1;
      if (rep.violations != want)
        fail(o, "seed " + std::to_string(seed) + " n=" + std::to_string(n) + ": " +
                    std::to_string(rep.violations.size()) + " vs " + std::to_string(want.size()));
    }
  }
  if (rebalanced == 0) fail(o, "no run rebalanced");
  if (o.pass) o.detail = std::to_string(runs) + " runs, " + std::to_string(rebalanced) + " with a rebalance";
  return o;
}

// 3
std::vector<Binding> gated(const Tgfd& r, const Snapshot& s) {
  std::vector<Binding> out;
  auto consts = gating_constants(r);
  for (const auto& b : match_snapshot(r.pattern, s)) {
    bool ok = true;
    for (const auto& c : consts) ok = ok && holds(r.pattern, c, s, b);
    if (ok) out.push_back(b);
  }
  return out;
}

bool replay(const TemporalGraph& g, const std::vector<Tgfd>& rules, std::size_t& searches, std::string& why) {
  auto norm = normalize(rules);
  std::vector<IncrementalMatcher> ms;
  for (const auto& r : norm) ms.emplace_back(r.pattern, gating_constants(r));
  Snapshot view = g.snapshot(1);
  for (auto& m : ms) m.initialize(view);
  for (Timestamp t = 1; t <= g.T(); ++t) {
    if (t > 1) {
      view.set_t(t);
      for (const auto& d : g.deltas(t)) {
        view.apply(d);
        for (auto& m : ms) m.apply(d, view);
      }
    }
    for (std::size_t i = 0; i < norm.size(); ++i) {
      if (ms[i].matches() != gated(norm[i], g.snapshot(t))) {
        why = norm[i].name + " at t=" + std::to_string(t);
        return false;
      }
    }
  }
  searches = 0;
  for (const auto& m : ms) searches += m.isomorphism_searches();
  return true;
}

Outcome incremental_matching() {
  Outcome o;
  const ChangeProfile profiles[] = {ChangeProfile::kUniform, ChangeProfile::kSkewedAU, ChangeProfile::kSkewedED,
                                    ChangeProfile::kSkewedEI};
  std::size_t searches_total = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    testgen::Shape shape;
    shape.max_vertices = 120;
    shape.max_T = 8;
    shape.chg_rate = 0.15;
    shape.profile = profiles[seed % 4];
    auto inst = testgen::random_instance(seed + 2000, shape);
    std::size_t searches = 0;
    std::string why;
    if (!replay(inst.graph, inst.rules, searches, why))
      fail(o, profile_name(shape.profile) + " seed " + std::to_string(seed) + ": " + why);
    searches_total += searches;

    // The same stream with its edge changes removed.
    std::vector<ChangeSet> attr_only = inst.data.changes;
    for (auto& cs : attr_only)
      std::erase_if(cs.changes, [](const Change& c) {
        return std::holds_alternative<EdgeInsert>(c) || std::holds_alternative<EdgeDelete>(c);
      });
    auto g = build_graph(inst.data.base, attr_only);
    if (!replay(g, inst.rules, searches, why))
      fail(o, "attribute-only seed " + std::to_string(seed) + ": " + why);
    if (searches != 0) fail(o, "attribute-only seed " + std::to_string(seed) + " ran " + std::to_string(searches) +
                                   " searches");
  }
  if (o.pass) o.detail = "100 streams, " + std::to_string(searches_total) + " searches; attribute-only streams 0";
  return o;
}

// 4
Outcome gfd_subsumption() {
  Outcome o;
  testgen::Shape shape;
  shape.max_vertices = 120;
  shape.max_T = 8;
  shape.max_rules = 4;
  std::size_t total = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto inst = testgen::random_instance(seed + 3000, shape);
    auto got = detect_sequential(inst.graph, apply_mode(inst.rules, DetectionMode::kGfd)).violations;
    auto want = oracle::per_snapshot(inst.graph, inst.rules);
    total += want.size();
    if (got != want) fail(o, "seed " + std::to_string(seed) + ": " + std::to_string(got.size()) + " vs " +
                                 std::to_string(want.size()));
  }
  if (o.pass) o.detail = "100 instances, " + std::to_string(total) + " violations";
  return o;
}

// 5
Tgfd with(Tgfd r, std::function<void(Tgfd&)> f) {
  f(r);
  return r;
}

Outcome foundations() {
  Outcome o;
  auto conflict = load_tgfds(kFixtures + "/conflict/rules.tgfd");
  auto disjoint = load_tgfds(kFixtures + "/conflict/disjoint.tgfd");
  if (check_satisfiability(conflict).satisfiable) fail(o, "conflicting pair reported satisfiable");
  if (!check_satisfiability(disjoint).satisfiable) fail(o, "disjoint-interval pair reported unsatisfiable");

  testgen::Shape shape;
  shape.max_edges = 3;
  int instances = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    std::mt19937_64 rng(seed);
    auto lit = [&](const GraphPattern& q) {
      return testgen::random_literal(rng, q, shape, static_cast<int>(rng() % 3));
    };
    auto lits = [&](const GraphPattern& q, std::size_t n) {
      std::set<Literal> s;
      while (s.size() < n) s.insert(lit(q));
      return s;
    };
    Tgfd base;
    base.name = "p";
    base.pattern = testgen::random_pattern(rng, shape);
    base.delta.p = static_cast<int>(rng() % 3);
    base.delta.q = base.delta.p + 2 + static_cast<int>(rng() % 4);
    base.x = lits(base.pattern, 1 + rng() % 2);
    base.y = lits(base.pattern, 1);

    struct Case {
      Axiom a;
      std::vector<Tgfd> premises;
      Tgfd conclusion;
    };
    std::vector<Case> cases;
    cases.push_back({Axiom::kReflexivity, {}, with(base, [&](Tgfd& c) { c.y = {*c.x.begin()}; })});
    cases.push_back({Axiom::kLiteralAugmentation, {base}, with(base, [&](Tgfd& c) { c.x.insert(lit(c.pattern)); })});
    cases.push_back({Axiom::kPatternAugmentation, {base}, with(base, [&](Tgfd& c) {
                       int n = static_cast<int>(c.pattern.size());
                       int fresh = c.pattern.add_node("extra", "T0");
                       c.pattern.add_edge(static_cast<int>(rng() % static_cast<unsigned>(n)), "l0", fresh);
                     })});
    {
      Tgfd first = base, second = base;
      first.y = lits(base.pattern, 2);
      second.x = first.y;
      second.y = {lit(base.pattern)};
      Tgfd c = base;
      c.y = second.y;
      cases.push_back({Axiom::kTransitivity, {first, second}, c});
    }
    {
      Tgfd p = base;
      p.y = lits(base.pattern, 2);
      cases.push_back({Axiom::kDecomposition, {p}, with(p, [&](Tgfd& c) { c.y = {*p.y.rbegin()}; })});
    }
    {
      Tgfd p1 = with(base, [](Tgfd& r) { r.delta = {0, 4}; });
      Tgfd p2 = with(base, [](Tgfd& r) { r.delta = {2, 7}; });
      cases.push_back({Axiom::kIntervalIntersection, {p1, p2}, with(base, [](Tgfd& r) { r.delta = {2, 4}; })});
    }
    cases.push_back({Axiom::kIntervalContainment, {base}, with(base, [](Tgfd& r) {
                       r.delta = {r.delta.p + 1, r.delta.q - 1};
                     })});
    for (const auto& c : cases) {
      ++instances;
      std::string tag = "axiom " + std::to_string(static_cast<int>(c.a)) + " seed " + std::to_string(seed);
      if (!axiom_check(c.a, c.premises, c.conclusion)) fail(o, tag + ": instance is not an axiom application");
      if (!check_implication(c.premises, c.conclusion).implied) fail(o, tag + ": not implied");
    }
  }

  IntervalSet merged{{0, 2}, {1, 4}};
  if (!(merged == IntervalSet{{0, 4}})) fail(o, "interval merge");
  Tgfd a;
  a.name = "a";
  a.pattern.add_node("x", "T0");
  a.x = {VariableLiteral{{"x", "a0"}, {"x", "a0"}}};
  a.y = {VariableLiteral{{"x", "a1"}, {"x", "a1"}}};
  a.delta = {0, 2};
  Tgfd b = with(a, [](Tgfd& r) { r.delta = {1, 4}; });
  Tgfd phi = with(a, [](Tgfd& r) { r.delta = {0, 4}; });
  auto imp = check_implication({a, b}, phi);
  if (!imp.implied || !(imp.derivable == IntervalSet{{0, 4}})) fail(o, "(0,2)+(1,4) does not give (0,4)");
  if (o.pass) o.detail = std::to_string(instances) + " axiom instances implied; fixtures and merge ok";
  return o;
}

// 6
Outcome assignment_quality() {
  Outcome o;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    std::mt19937_64 rng(seed);
    int count = 1 + static_cast<int>(rng() % 8);
    std::vector<Job> jobs(static_cast<std::size_t>(count));
    std::vector<double> sizes;
    for (int i = 0; i < count; ++i) {
      auto& j = jobs[static_cast<std::size_t>(i)];
      j.name = "j" + std::to_string(i);
      j.estimated_size = static_cast<double>(1 + rng() % 20);
      j.worker_id = static_cast<int>(rng() % 3);
      for (int w = 0; w < 3; ++w) j.ccost_by_worker.push_back(w == j.worker_id ? 0 : rng() % 10);
      j.ccost = 0;
      sizes.push_back(j.estimated_size);
    }
    Bounds b{1, 20};
    auto a = gen_assign(jobs, 3, b);
    double opt = oracle::optimal_makespan(sizes, 3);
    worst = std::max(worst, a.makespan / opt);
    if (a.makespan > 2 * opt) fail(o, "seed " + std::to_string(seed) + ": " + fmt(a.makespan) + " > 2 x " + fmt(opt));

    double total = 0;
    for (double s : sizes) total += s;
    if (gen_assign(jobs, 1, b).makespan != total) fail(o, "n=1 seed " + std::to_string(seed));
    if (gen_assign({jobs[0]}, 3, b).makespan != sizes[0]) fail(o, "single job seed " + std::to_string(seed));
  }
  if (o.pass) o.detail = "50 instances, worst ratio " + fmt(worst);
  return o;
}

// 7
std::vector<Tgfd> injection_rules() {
  return parse_tgfds(R"(
tgfd same_a1
vertex x T0
vertex y T1
edge x l0 y
delta (0, 2)
x: x.a0 == x.a0
y: y.a1 == y.a1

tgfd keeps_c1
vertex x T1
vertex y T2
edge x l1 y
delta (1, 3)
x: y.a2 = "c0"
y: x.a0 = "c1"

tgfd cross
vertex x T2
vertex y T0
edge x l0 y
delta (0, 1)
x: x.a1 == y.a1
y: x.a2 == x.a2
)");
}

Outcome injection_roundtrip() {
  Outcome o;
  auto rules = injection_rules();
  double phi_sum = 0;
  std::size_t injected = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthParams p;
    p.vertices = 150;
    p.edges = 450;
    p.types = 3;
    p.labels = 2;
    p.attrs = 3;
    p.domain = 3;
    p.T = 6;
    p.seed = seed;
    auto data = generate_synthetic(p);
    InjectOptions io;
    io.err_rate = 0.03;
    io.seed = seed;
    auto inj = inject_errors(data.base, data.changes, rules, io);
    const auto& L = inj.ledger;
    std::string tag = "seed " + std::to_string(seed);
    if (L.insufficient) fail(o, tag + ": insufficient pairs");
    if (L.gamma_plus.empty()) fail(o, tag + ": nothing injected");
    injected += L.gamma_plus.size();
    auto g = build_graph(inj.base, inj.changes);

    auto m = score(detect_sequential(g, rules).violations, L);
    if (m.precision != 1.0 || m.recall != 1.0 || m.f1 != 1.0)
      fail(o, tag + ": P/R/F1 " + fmt(m.precision) + "/" + fmt(m.recall) + "/" + fmt(m.f1));

    double phi = L.cross_snapshot_fraction();
    phi_sum += phi;
    auto gfd = score(detect_sequential(g, apply_mode(rules, DetectionMode::kGfd)).violations, L);
    if (gfd.recall > 1.0 - phi + 1e-12)
      fail(o, tag + ": GFD recall " + fmt(gfd.recall) + " > 1 - " + fmt(phi));
  }
  if (phi_sum == 0) fail(o, "no cross-snapshot errors, the GFD bound is vacuous");
  if (o.pass) o.detail = "10 runs, " + std::to_string(injected) + " injected, mean phi " + fmt(phi_sum / 10);
  return o;
}

// 8
std::vector<Tgfd> burst_rules() {
  return parse_tgfds(R"(
tgfd linked
vertex x _
vertex y _
edge x l0 y
delta (0, 2)
x: x.a0 == x.a0
y: y.a1 = "c0"
)");
}

Outcome burstiness() {
  Outcome o;
  auto rules = burst_rules();
  const int n = 4;
  SynthParams p;
  p.vertices = 1000;
  p.edges = 4000;
  p.types = 3;
  p.labels = 3;
  p.attrs = 2;
  p.domain = 4;
  p.T = 10;
  p.chg_rate = 0.04;
  std::size_t uniform_rebalances = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    p.seed = seed;
    p.profile = ChangeProfile::kUniform;
    auto data = generate_synthetic(p);
    ParallelOptions opts;
    opts.workers = n;
    opts.zeta = 0.1;
    opts.time_model = TimeModel::kSize;
    opts.seed = seed;
    auto rep = run_parallel(build_graph(data.base, data.changes), rules, opts);
    uniform_rebalances += rep.rebalances.size();
  }
  if (uniform_rebalances != 0) fail(o, "uniform streams rebalanced " + std::to_string(uniform_rebalances) + " times");

  p.seed = 7;
  p.profile = ChangeProfile::kSkewedEI;
  auto owner = balanced_partition(p.vertices, n, 7);
  p.hotspot.clear();
  for (std::size_t v = 0; v < owner.size(); ++v)
    if (owner[v] == 0) p.hotspot.push_back("v" + std::to_string(v));
  auto data = generate_synthetic(p);
  ParallelOptions opts;
  opts.workers = n;
  opts.zeta = 0.1;
  opts.time_model = TimeModel::kSize;
  opts.partition = owner;
  auto rep = run_parallel(build_graph(data.base, data.changes), rules, opts);
  if (rep.rebalances.empty()) fail(o, "skewed stream never rebalanced");
  double frac = rep.overhead_fraction();
  if (frac >= 0.15) fail(o, "overhead " + fmt(100 * frac) + "% of simulated time");
  if (o.pass)
    o.detail = "uniform 0 rebalances; hotspot " + std::to_string(rep.rebalances.size()) + " rebalances, overhead " +
               fmt(100 * frac) + "%";
  return o;
}

// 9
Outcome coordinator_pairs() {
  Outcome o;
  auto g = load_temporal_graph(kFixtures + "/two_workers/graph.txt", kFixtures + "/two_workers/changes.txt");
  auto rules = load_tgfds(kFixtures + "/two_workers/rules.tgfd");
  ParallelOptions opts;
  opts.workers = 2;
  opts.bounds = {0, 10};
  opts.record_validated_pairs = true;
  opts.partition.resize(g.vertex_count());
  for (const char* id : {"ann2", "globex"}) opts.partition[g.context().resolve(id)] = 1;
  auto rep = run_parallel(g, rules, opts);

  // (worker, t) of each side; each worker holds one person.
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> got, want{{{0, 1}, {1, 1}},
                                                                           {{1, 1}, {0, 4}},
                                                                           {{0, 4}, {1, 5}}};
  for (const auto& vp : rep.coordinator_pairs)
    got.insert({{vp.first.origin, vp.first.t}, {vp.second.origin, vp.second.t}});
  if (got != want || rep.coordinator_pairs.size() != 3) {
    std::ostringstream s;
    s << "got";
    for (const auto& [a, b] : got) s << " (w" << a.first << "@" << a.second << ", w" << b.first << "@" << b.second << ")";
    fail(o, s.str());
  }
  if (rep.violations != detect_sequential(g, rules).violations) fail(o, "violations differ from sequential");
  if (o.pass) o.detail = "{(h1,h'1), (h4,h'1), (h4,h'5)}";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"pairwise oracle equivalence", pairwise_oracle},
      {"parallel equals sequential", parallel_equivalence},
      {"incremental equals batch matching", incremental_matching},
      {"GFD subsumption", gfd_subsumption},
      {"foundations fixtures", foundations},
      {"assignment within 2x optimum", assignment_quality},
      {"injection round trip", injection_roundtrip},
      {"burstiness and rebalancing", burstiness},
      {"coordinator pair list", coordinator_pairs},
  };
  int failed = 0;
  int i = 0;
  for (const auto& c : criteria) {
    ++i;
    Outcome out;
    auto t0 = Clock::now();
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += out.pass ? 0 : 1;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  " << i << ". " << c.name << " (" << fmt(seconds_since(t0))
              << " s): " << out.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
