#include "tgfd/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tgfd/error.hpp"

namespace tgfd {

CardinalityModel CardinalityModel::build(const Snapshot& s, const std::vector<bool>* region) {
  CardinalityModel m;
  std::map<Key, double> per_vertex;
  for (VertexIndex v = 0; v < s.vertex_count(); ++v) {
    if (!s.present(v) || (region && !(*region)[v])) continue;
    Symbol tv = s.type(v);
    ++m.type_count_[tv];
    ++m.total_;
    for (const auto& [name, value] : s.attrs(v)) {
      ++m.values_[{tv, name, value}];
      ++m.values_[{kNoSymbol, name, value}];
    }
    per_vertex.clear();
    for (bool forward : {true, false}) {
      for (const Neighbor& n : forward ? s.out(v) : s.in(v)) {
        if (!s.present(n.v)) continue;
        Symbol tn = s.type(n.v);
        for (Symbol from : {tv, kNoSymbol})
          for (Symbol to : {tn, kNoSymbol}) per_vertex[{from, n.label, to, forward}] += 1;
      }
    }
    for (const auto& [k, c] : per_vertex) {
      auto& [sum, sq] = m.sums_[k];
      sum += c;
      sq += c * c;
    }
  }
  return m;
}

std::size_t CardinalityModel::vertices(Symbol type) const {
  if (type == kNoSymbol) return total_;
  auto it = type_count_.find(type);
  return it == type_count_.end() ? 0 : it->second;
}

CardinalityModel::Stat CardinalityModel::fanout(Symbol from, Symbol label, Symbol to, bool forward) const {
  auto it = sums_.find({from, label, to, forward});
  double n = static_cast<double>(vertices(from));
  if (it == sums_.end() || n == 0) return {};
  double mean = it->second.first / n;
  double var = std::max(0.0, it->second.second / n - mean * mean);
  return {mean, std::sqrt(var)};
}

double CardinalityModel::selectivity(Symbol type, Symbol attr, const std::string& value) const {
  double n = static_cast<double>(vertices(type));
  if (n == 0) return 0;
  auto it = values_.find({type, attr, value});
  return it == values_.end() ? 0.0 : static_cast<double>(it->second) / n;
}

namespace {

Symbol node_type(const GraphPattern& q, int var, const SymbolTable& symbols) {
  const auto& label = q.nodes()[static_cast<std::size_t>(var)].label;
  return label == kWildcard ? kNoSymbol : symbols.find(label);
}

}  // namespace

double per_center_estimate(const CardinalityModel& m, const GraphPattern& q, const PathPattern& p,
                           const SymbolTable& symbols) {
  double est = 1.0;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& e = q.edges()[static_cast<std::size_t>(p.edges[i])];
    Symbol label = symbols.find(e.label);
    if (label == kNoSymbol) return 0;
    // Edges right of the center are walked forward, those left of it backward.
    bool forward = static_cast<int>(i) >= p.center;
    Symbol from = node_type(q, forward ? e.src : e.dst, symbols);
    Symbol to = node_type(q, forward ? e.dst : e.src, symbols);
    est *= m.fanout(from, label, to, forward).mean;
  }
  for (const auto& lit : p.literals) {
    int v = q.var_index(lit.ref.var);
    if (v == p.center_var()) continue;
    Symbol attr = symbols.find(lit.ref.attr);
    est *= attr == kNoSymbol ? 0.0 : m.selectivity(node_type(q, v, symbols), attr, lit.value);
  }
  return est;
}

double estimate_cardinality(const CardinalityModel& m, const GraphPattern& q, const PathPattern& p,
                            const Snapshot& s, const std::vector<bool>* region) {
  CompiledPattern cq = compile(q, s.symbols());
  if (cq.impossible) return 0;
  int c = p.center_var();
  std::size_t centers = 0;
  for (VertexIndex v = 0; v < s.vertex_count(); ++v) {
    if (!s.present(v) || (region && !(*region)[v]) || !cq.type_ok(c, s, v)) continue;
    bool ok = true;
    for (const auto& lit : p.literals) {
      if (q.var_index(lit.ref.var) != c) continue;
      Symbol a = s.symbols().find(lit.ref.attr);
      const std::string* val = a == kNoSymbol ? nullptr : s.attr(v, a);
      ok = ok && val && *val == lit.value;
    }
    if (ok) ++centers;
  }
  return static_cast<double>(centers) * per_center_estimate(m, q, p, s.symbols());
}

std::size_t ccost_joblet(const Snapshot& s, const Joblet& j, const std::vector<int>& owner) {
  std::vector<VertexIndex> vs = ball(s, j.center, j.d);
  std::size_t cost = 0;
  for (VertexIndex v : vs) {
    for (const Neighbor& n : s.out(v)) {
      if (!std::binary_search(vs.begin(), vs.end(), n.v)) continue;
      if (owner[v] != j.worker || owner[n.v] != j.worker) ++cost;
    }
  }
  return cost;
}

namespace {

std::size_t cost_on(const Job& j, int w) {
  if (j.ccost_by_worker.empty()) return j.ccost;
  return j.ccost_by_worker[static_cast<std::size_t>(w)];
}

bool pack(const std::vector<Job>& jobs, const std::vector<std::size_t>& order, int n, double cap, Assignment& out) {
  out.worker_of.assign(jobs.size(), -1);
  out.load.assign(static_cast<std::size_t>(n), 0.0);
  out.comm_cost = 0;
  const double eps = 1e-9 * std::max(1.0, cap);
  for (std::size_t idx : order) {
    const Job& j = jobs[idx];
    int best = -1;
    for (int w = 0; w < n; ++w) {
      if (out.load[static_cast<std::size_t>(w)] + j.estimated_size > cap + eps) continue;
      if (best < 0) {
        best = w;
        continue;
      }
      std::size_t cw = cost_on(j, w), cb = cost_on(j, best);
      if (cw < cb || (cw == cb && out.load[static_cast<std::size_t>(w)] > out.load[static_cast<std::size_t>(best)])) {
        best = w;
      }
    }
    if (best < 0) return false;
    out.worker_of[idx] = best;
    out.load[static_cast<std::size_t>(best)] += j.estimated_size;
    out.comm_cost += cost_on(j, best);
  }
  out.makespan = *std::max_element(out.load.begin(), out.load.end());
  return true;
}

}  // namespace

Assignment gen_assign(const std::vector<Job>& jobs, int n, Bounds bounds) {
  if (n < 1) throw std::invalid_argument("gen_assign needs at least one worker");
  double total = 0, largest = 0;
  for (const auto& j : jobs) {
    if (j.estimated_size < bounds.t_l || j.estimated_size > bounds.t_u) {
      throw JobOutOfBounds("job " + j.name + " size " + std::to_string(j.estimated_size) + " outside [" +
                           std::to_string(bounds.t_l) + ", " + std::to_string(bounds.t_u) + "]");
    }
    total += j.estimated_size;
    largest = std::max(largest, j.estimated_size);
  }
  std::vector<std::size_t> order(jobs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Job& x = jobs[a];
    const Job& y = jobs[b];
    if (x.estimated_size != y.estimated_size) return x.estimated_size > y.estimated_size;
    if (x.ccost != y.ccost) return x.ccost < y.ccost;
    return x.name < y.name;
  });
  Assignment best;
  double lo = std::max(total / n, largest);
  if (pack(jobs, order, n, lo, best)) return best;
  double hi = total;
  pack(jobs, order, n, hi, best);  // one worker can always take everything
  for (int it = 0; it < 64 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
    double mid = (lo + hi) / 2;
    Assignment a;
    if (pack(jobs, order, n, mid, a)) {
      hi = mid;
      best = std::move(a);
    } else {
      lo = mid;
    }
  }
  return best;
}

}  // namespace tgfd
