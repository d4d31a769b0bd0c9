#include "tgfd/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tgfd {

std::vector<int> balanced_partition(std::size_t vertices, int workers, std::uint64_t seed) {
  if (workers < 1) throw std::invalid_argument("need at least one worker");
  std::vector<VertexIndex> perm(vertices);
  for (std::size_t i = 0; i < vertices; ++i) perm[i] = static_cast<VertexIndex>(i);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> owner(vertices, 0);
  for (std::size_t i = 0; i < vertices; ++i) owner[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(workers));
  return owner;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-rule data the planner and the workers share.
struct RulePlan {
  Tgfd rule;
  std::vector<ConstantLiteral> gating;
  std::vector<PathPattern> paths;
  int anchor = 0;  // pattern variable whose vertex decides ownership
  int radius = 0;
};

std::vector<RulePlan> prepare(const std::vector<Tgfd>& rules) {
  std::vector<RulePlan> out;
  for (auto& r : normalize(rules)) {
    RulePlan p;
    p.gating = gating_constants(r);
    p.paths = decompose(r.pattern, p.gating);
    p.anchor = r.pattern.center();
    p.radius = r.pattern.eccentricity(p.anchor);
    p.rule = std::move(r);
    out.push_back(std::move(p));
  }
  return out;
}

double region_size(const RulePlan& rp, const Snapshot& s, const std::vector<VertexIndex>& region) {
  std::vector<bool> in(s.vertex_count(), false);
  for (VertexIndex v : region) in[v] = true;
  CardinalityModel m = CardinalityModel::build(s, &in);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : rp.paths) best = std::min(best, estimate_cardinality(m, rp.rule.pattern, p, s, &in));
  return std::max(0.0, best);
}

bool center_ok(const CompiledPattern& cq, const GraphPattern& q, const PathPattern& p, const Snapshot& s,
               VertexIndex v) {
  int c = p.center_var();
  if (!s.present(v) || !cq.type_ok(c, s, v)) return false;
  for (const auto& lit : p.literals) {
    if (q.var_index(lit.ref.var) != c) continue;
    Symbol a = s.symbols().find(lit.ref.attr);
    const std::string* val = a == kNoSymbol ? nullptr : s.attr(v, a);
    if (!val || *val != lit.value) return false;
  }
  return true;
}

void fill_joblets(const RulePlan& rp, const Snapshot& s, const std::vector<int>& owner, int n, Job& job) {
  CompiledPattern cq = compile(rp.rule.pattern, s.symbols());
  std::vector<bool> in(s.vertex_count(), false);
  for (VertexIndex v : job.region) in[v] = true;
  CardinalityModel m = CardinalityModel::build(s, &in);
  job.ccost_by_worker.assign(static_cast<std::size_t>(n), 0);
  std::vector<std::size_t> inside(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < rp.paths.size(); ++k) {
    const PathPattern& p = rp.paths[k];
    double per_center = cq.impossible ? 0.0 : per_center_estimate(m, rp.rule.pattern, p, s.symbols());
    for (VertexIndex v : job.region) {
      if (cq.impossible || !center_ok(cq, rp.rule.pattern, p, s, v)) continue;
      Joblet jl{rp.rule.name, static_cast<int>(k), job.worker_id, v, p.radius, per_center, 0};
      std::vector<VertexIndex> vs = ball(s, v, p.radius);
      std::size_t total = 0;
      std::fill(inside.begin(), inside.end(), 0);
      for (VertexIndex a : vs) {
        for (const Neighbor& nb : s.out(a)) {
          if (!std::binary_search(vs.begin(), vs.end(), nb.v)) continue;
          ++total;
          if (owner[a] == owner[nb.v]) ++inside[static_cast<std::size_t>(owner[a])];
        }
      }
      for (int w = 0; w < n; ++w) job.ccost_by_worker[static_cast<std::size_t>(w)] += total - inside[static_cast<std::size_t>(w)];
      jl.ccost = total - inside[static_cast<std::size_t>(job.worker_id)];
      job.joblets.push_back(jl);
    }
  }
  job.ccost = job.ccost_by_worker[static_cast<std::size_t>(job.worker_id)];
}

struct JobMeta {
  std::size_t rule = 0;
};

// Splits a fragment's region in halves until the job fits t_u or cannot be split.
void form_jobs(const RulePlan& rp, std::size_t rule_idx, const Snapshot& s, std::vector<VertexIndex> region,
               int home, const std::string& name, double t_u, std::vector<Job>& jobs, std::vector<JobMeta>& meta) {
  double size = region_size(rp, s, region);
  if (size > t_u && region.size() > 1) {
    std::size_t half = region.size() / 2;
    std::vector<VertexIndex> right(region.begin() + static_cast<std::ptrdiff_t>(half), region.end());
    region.resize(half);
    form_jobs(rp, rule_idx, s, std::move(region), home, name + ".0", t_u, jobs, meta);
    form_jobs(rp, rule_idx, s, std::move(right), home, name + ".1", t_u, jobs, meta);
    return;
  }
  Job j;
  j.name = name;
  j.tgfd = rp.rule.name;
  j.worker_id = home;
  j.region = std::move(region);
  j.estimated_size = size;
  jobs.push_back(std::move(j));
  meta.push_back({rule_idx});
}

struct Planned {
  JobPlan plan;
  std::vector<JobMeta> meta;
};

// Forms the jobs on snapshot s and assigns them. bounds.t_u <= 0 derives the
// bounds from the unsplit jobs; otherwise the bounds are widened to cover
// jobs that could not be split below t_u.
Planned make_plan(const std::vector<RulePlan>& rules, const Snapshot& s, const std::vector<int>& owner, int n,
                  Bounds bounds) {
  Planned out;
  std::vector<std::vector<VertexIndex>> frags(static_cast<std::size_t>(n));
  for (VertexIndex v = 0; v < s.vertex_count(); ++v) frags[static_cast<std::size_t>(owner[v])].push_back(v);
  bool derive = bounds.t_u <= 0;
  double t_u = derive ? std::numeric_limits<double>::infinity() : bounds.t_u;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    for (int f = 0; f < n; ++f) {
      form_jobs(rules[r], r, s, frags[static_cast<std::size_t>(f)], f, rules[r].rule.name + "@F" + std::to_string(f),
                t_u, out.plan.jobs, out.meta);
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& j : out.plan.jobs) {
    lo = std::min(lo, j.estimated_size);
    hi = std::max(hi, j.estimated_size);
  }
  if (out.plan.jobs.empty()) lo = hi = 0;
  if (derive) {
    bounds = {lo, hi};
  } else {
    bounds.t_l = std::min(bounds.t_l, lo);
    bounds.t_u = std::max(bounds.t_u, hi);
  }
  for (std::size_t i = 0; i < out.plan.jobs.size(); ++i) {
    Job& j = out.plan.jobs[i];
    fill_joblets(rules[out.meta[i].rule], s, owner, n, j);
  }
  out.plan.bounds = bounds;
  out.plan.partition = owner;
  out.plan.assignment = gen_assign(out.plan.jobs, n, bounds);
  return out;
}

std::vector<int> resolve_partition(const TemporalGraph& g, const ParallelOptions& opts) {
  if (opts.workers < 1) throw std::invalid_argument("need at least one worker");
  if (opts.partition.empty()) return balanced_partition(g.vertex_count(), opts.workers, opts.seed);
  if (opts.partition.size() != g.vertex_count()) throw std::invalid_argument("partition size does not match graph");
  for (int w : opts.partition) {
    if (w < 0 || w >= opts.workers) throw std::invalid_argument("partition names an unknown worker");
  }
  return opts.partition;
}

// anchors[w][r]: vertices whose matches of rule r worker w owns.
using Anchors = std::vector<std::vector<std::vector<VertexIndex>>>;

Anchors anchors_of(const Planned& p, std::size_t rules, int n) {
  Anchors a(static_cast<std::size_t>(n), std::vector<std::vector<VertexIndex>>(rules));
  for (std::size_t j = 0; j < p.plan.jobs.size(); ++j) {
    auto& dst = a[static_cast<std::size_t>(p.plan.assignment.worker_of[j])][p.meta[j].rule];
    dst.insert(dst.end(), p.plan.jobs[j].region.begin(), p.plan.jobs[j].region.end());
  }
  for (auto& per_worker : a)
    for (auto& vs : per_worker) std::sort(vs.begin(), vs.end());
  return a;
}

// Edges a worker needs: those induced by the ball around each anchor that
// can host the rule's anchor variable.
std::set<Edge> view_edges(const std::vector<RulePlan>& rules, const std::vector<std::vector<VertexIndex>>& anchors,
                          const Snapshot& s) {
  std::set<Edge> out;
  std::vector<bool> mark(s.vertex_count(), false);
  for (std::size_t r = 0; r < rules.size(); ++r) {
    CompiledPattern cq = compile(rules[r].rule.pattern, s.symbols());
    if (cq.impossible) continue;
    for (VertexIndex c : anchors[r]) {
      if (!s.present(c) || !cq.type_ok(rules[r].anchor, s, c)) continue;
      std::vector<VertexIndex> vs = ball(s, c, rules[r].radius);
      for (VertexIndex v : vs) mark[v] = true;
      for (VertexIndex v : vs)
        for (const Neighbor& nb : s.out(v))
          if (mark[nb.v]) out.insert({v, nb.label, nb.v});
      for (VertexIndex v : vs) mark[v] = false;
    }
  }
  return out;
}

struct Worker {
  int id = 0;
  Snapshot view;
  std::vector<IncrementalMatcher> matchers;
  std::vector<IncTed> local;
  std::vector<std::vector<VertexIndex>> anchors;
  bool reinit = true;

  // Filled by each superstep.
  std::vector<std::vector<Binding>> matches;
  std::vector<Violation> violations;
  WorkerStep report;
  double wall = 0;
};

void worker_step(Worker& w, const std::vector<RulePlan>& rules, const TemporalGraph& g, const std::vector<int>& owner,
                 Timestamp t) {
  auto start = Clock::now();
  const Snapshot& snap = g.snapshot(t);
  std::size_t shipped = 0;
  auto borrowed = [&](const Edge& e) { return owner[e.src] != w.id || owner[e.dst] != w.id; };
  if (w.reinit) {
    std::set<Edge> before = w.view.context_ptr() ? w.view.edges() : std::set<Edge>{};
    std::set<Edge> need = view_edges(rules, w.anchors, snap);
    w.view = snap;
    for (const Edge& e : snap.edges())
      if (!need.count(e)) w.view.erase_edge(e);
    for (const Edge& e : need)
      if (!before.count(e) && borrowed(e)) ++shipped;
    w.matchers.clear();
    for (std::size_t r = 0; r < rules.size(); ++r) {
      AnchorFilter f;
      f.var = rules[r].anchor;
      f.allowed.assign(snap.vertex_count(), false);
      for (VertexIndex v : w.anchors[r]) f.allowed[v] = true;
      w.matchers.emplace_back(rules[r].rule.pattern, rules[r].gating, std::move(f));
      w.matchers.back().initialize(w.view);
    }
    w.reinit = false;
  } else {
    w.view.set_t(t);
    for (const GraphDelta& d : g.deltas(t)) {
      if (d.is_edge()) continue;
      w.view.apply(d);
      for (auto& m : w.matchers) m.apply(d, w.view);
    }
    std::set<Edge> need = view_edges(rules, w.anchors, snap);
    std::vector<Edge> drop, add;
    std::set_difference(w.view.edges().begin(), w.view.edges().end(), need.begin(), need.end(),
                        std::back_inserter(drop));
    std::set_difference(need.begin(), need.end(), w.view.edges().begin(), w.view.edges().end(),
                        std::back_inserter(add));
    for (const Edge& e : drop) {
      GraphDelta d = GraphDelta::erase(e);
      w.view.apply(d);
      for (auto& m : w.matchers) m.apply(d, w.view);
    }
    for (const Edge& e : add) {
      GraphDelta d = GraphDelta::insert(e);
      w.view.apply(d);
      for (auto& m : w.matchers) m.apply(d, w.view);
      if (borrowed(e)) ++shipped;
    }
  }
  w.matches.assign(rules.size(), {});
  w.violations.clear();
  std::size_t match_count = 0;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    w.matches[r] = w.matchers[r].matches();
    match_count += w.matches[r].size();
    auto v = w.local[r].step(t, w.matches[r], snap, w.id);
    w.violations.insert(w.violations.end(), v.begin(), v.end());
  }
  w.report.worker = w.id;
  w.report.shipped_edges = shipped;
  w.report.matches = match_count;
  w.report.local_violations = w.violations.size();
  w.wall = seconds_since(start);
}

void run_workers(std::vector<Worker>& workers, const std::vector<RulePlan>& rules, const TemporalGraph& g,
                 const std::vector<int>& owner, Timestamp t, bool threads) {
  if (!threads || workers.size() == 1) {
    for (auto& w : workers) worker_step(w, rules, g, owner, t);
    return;
  }
  std::vector<std::exception_ptr> errors(workers.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < workers.size(); ++i) {
    pool.emplace_back([&, i] {
      try {
        worker_step(workers[i], rules, g, owner, t);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

JobPlan plan_jobs(const TemporalGraph& g, const std::vector<Tgfd>& rules, const ParallelOptions& opts, Timestamp t) {
  std::vector<RulePlan> rp = prepare(rules);
  std::vector<int> owner = resolve_partition(g, opts);
  return make_plan(rp, g.snapshot(t), owner, opts.workers, opts.bounds).plan;
}

RunReport run_parallel(const TemporalGraph& g, const std::vector<Tgfd>& rules, const ParallelOptions& opts) {
  const int n = opts.workers;
  std::vector<RulePlan> rp = prepare(rules);
  std::vector<int> owner = resolve_partition(g, opts);
  RunReport report;

  Planned planned = make_plan(rp, g.snapshot(1), owner, n, opts.bounds);
  report.initial = planned.plan;
  Bounds bounds = planned.plan.bounds;
  Anchors anchors = anchors_of(planned, rp.size(), n);

  std::vector<Worker> workers(static_cast<std::size_t>(n));
  for (int w = 0; w < n; ++w) {
    Worker& wk = workers[static_cast<std::size_t>(w)];
    wk.id = w;
    wk.anchors = anchors[static_cast<std::size_t>(w)];
    for (const auto& r : rp) wk.local.emplace_back(r.rule, g.T(), PairScope::kAll);
  }
  std::vector<IncTed> coord;
  for (const auto& r : rp) {
    coord.emplace_back(r.rule, g.T(), PairScope::kCrossOrigin);
    coord.back().record_validated_pairs(opts.record_validated_pairs);
  }

  double wall_scale = 0;  // size units per second, fixed at the first superstep
  for (Timestamp t = 1; t <= g.T(); ++t) {
    const Snapshot& snap = g.snapshot(t);
    run_workers(workers, rp, g, owner, t, opts.use_threads);

    SuperstepReport step;
    step.t = t;
    for (auto& w : workers) {
      report.violations.insert(report.violations.end(), w.violations.begin(), w.violations.end());
    }
    for (std::size_t r = 0; r < rp.size(); ++r) {
      for (auto& w : workers) {
        auto v = coord[r].step(t, w.matches[r], snap, w.id);
        step.coordinator_violations += v.size();
        report.violations.insert(report.violations.end(), v.begin(), v.end());
      }
    }

    // Job times at this superstep.
    const auto& jobs = planned.plan.jobs;
    std::vector<double> sizes(jobs.size());
    for (std::size_t j = 0; j < jobs.size(); ++j) sizes[j] = region_size(rp[planned.meta[j].rule], snap, jobs[j].region);
    std::vector<double> worker_size(static_cast<std::size_t>(n), 0.0);
    std::vector<std::size_t> worker_jobs(static_cast<std::size_t>(n), 0);
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      auto w = static_cast<std::size_t>(planned.plan.assignment.worker_of[j]);
      worker_size[w] += sizes[j];
      ++worker_jobs[w];
    }
    step.job_times = sizes;
    if (opts.time_model == TimeModel::kWall) {
      if (t == 1) {
        double total_size = 0, total_wall = 0;
        for (double s : sizes) total_size += s;
        for (auto& w : workers) total_wall += w.wall;
        wall_scale = total_wall > 0 ? total_size / total_wall : 1.0;
      }
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        auto w = static_cast<std::size_t>(planned.plan.assignment.worker_of[j]);
        double share = worker_size[w] > 0 ? sizes[j] / worker_size[w] : 1.0 / static_cast<double>(worker_jobs[w]);
        step.job_times[j] = workers[w].wall * share * wall_scale;
      }
    }
    for (auto& w : workers) {
      WorkerStep ws = w.report;
      auto i = static_cast<std::size_t>(w.id);
      ws.jobs = worker_jobs[i];
      ws.time = opts.time_model == TimeModel::kWall ? w.wall : worker_size[i];
      step.makespan = std::max(step.makespan, ws.time);
      step.workers.push_back(ws);
    }
    report.simulated_time += step.makespan;

    std::string trigger;
    if (opts.force_rebalance_at.count(t)) trigger = "forced";
    for (std::size_t j = 0; j < jobs.size() && trigger.empty(); ++j) {
      double x = step.job_times[j];
      if (x < (1 - opts.zeta) * bounds.t_l) trigger = "job " + jobs[j].name + " time " + fmt(x) + " below bound";
      if (x > (1 + opts.zeta) * bounds.t_u) trigger = "job " + jobs[j].name + " time " + fmt(x) + " above bound";
    }
    report.supersteps.push_back(std::move(step));

    if (trigger.empty() || t == g.T()) continue;
    auto start = Clock::now();
    Planned next = make_plan(rp, snap, owner, n, bounds);
    Anchors next_anchors = anchors_of(next, rp.size(), n);
    RebalanceEvent ev;
    ev.t = t;
    ev.trigger = trigger;
    ev.jobs_before = planned.plan.jobs.size();
    ev.jobs_after = next.plan.jobs.size();
    for (int w = 0; w < n; ++w) {
      auto i = static_cast<std::size_t>(w);
      if (next_anchors[i] == anchors[i]) continue;
      std::set<Edge> old_edges = view_edges(rp, anchors[i], snap);
      std::set<Edge> new_edges = view_edges(rp, next_anchors[i], snap);
      for (const Edge& e : new_edges) ev.relocated_edges += old_edges.count(e) ? 0 : 1;
      workers[i].anchors = next_anchors[i];
      workers[i].reinit = true;
    }
    ev.overhead = opts.time_model == TimeModel::kWall ? seconds_since(start)
                                                      : opts.ship_cost_per_edge * static_cast<double>(ev.relocated_edges);
    report.rebalance_overhead += ev.overhead;
    report.simulated_time += ev.overhead;
    report.rebalances.push_back(std::move(ev));
    planned = std::move(next);
    anchors = std::move(next_anchors);
    bounds = planned.plan.bounds;
  }

  std::sort(report.violations.begin(), report.violations.end());
  report.violations.erase(std::unique(report.violations.begin(), report.violations.end()), report.violations.end());
  for (std::size_t r = 0; r < rp.size(); ++r) {
    for (const auto& [a, b] : coord[r].validated_pairs()) report.coordinator_pairs.push_back({rp[r].rule.name, a, b});
  }
  report.final_bounds = bounds;
  return report;
}

}  // namespace tgfd
