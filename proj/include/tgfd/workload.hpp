#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "tgfd/matcher.hpp"
#include "tgfd/model.hpp"
#include "tgfd/temporal_graph.hpp"

namespace tgfd {

// Per-(source type, label, target type) fan-out statistics of one snapshot,
// optionally restricted to source vertices in a region.
class CardinalityModel {
 public:
  struct Stat {
    double mean = 0;
    double stddev = 0;
  };

  // region[v] selects source vertices; nullptr means all present vertices.
  static CardinalityModel build(const Snapshot& s, const std::vector<bool>* region = nullptr);

  // Neighbors per `from` vertex along `label` edges (forward: out-edges,
  // otherwise in-edges) whose other end has type `to`. kNoSymbol is "any type".
  Stat fanout(Symbol from, Symbol label, Symbol to, bool forward) const;
  // Share of `type` vertices whose attr equals value.
  double selectivity(Symbol type, Symbol attr, const std::string& value) const;
  std::size_t vertices(Symbol type) const;

 private:
  using Key = std::tuple<Symbol, Symbol, Symbol, bool>;
  std::map<Key, std::pair<double, double>> sums_;  // sum, sum of squares
  std::map<Symbol, std::size_t> type_count_;
  std::size_t total_ = 0;
  std::map<std::tuple<Symbol, Symbol, std::string>, std::size_t> values_;
};

// Expected matches of the path per center vertex: product of mean fan-outs
// walking outward from the center, times the selectivity of constants on
// non-center nodes.
double per_center_estimate(const CardinalityModel& m, const GraphPattern& q, const PathPattern& p,
                           const SymbolTable& symbols);

// Literal-satisfying center candidates (in region) times per_center_estimate.
double estimate_cardinality(const CardinalityModel& m, const GraphPattern& q, const PathPattern& p,
                            const Snapshot& s, const std::vector<bool>* region = nullptr);

struct Joblet {
  std::string tgfd;
  int path = 0;
  int worker = 0;
  VertexIndex center = 0;
  int d = 0;
  double estimated_size = 0;
  std::size_t ccost = 0;
};

// Edges of the d-hop ball around the joblet's center with an endpoint not
// owned by the joblet's worker. owner[v] is v's worker.
std::size_t ccost_joblet(const Snapshot& s, const Joblet& j, const std::vector<int>& owner);

struct Job {
  std::string name;
  std::string tgfd;
  int worker_id = 0;  // home worker
  std::vector<VertexIndex> region;
  std::vector<Joblet> joblets;
  double estimated_size = 0;  // min over paths of the summed joblet sizes
  std::size_t ccost = 0;      // at the home worker
  std::vector<std::size_t> ccost_by_worker;  // cost of running on each worker; may be empty
};

struct Bounds {
  double t_l = 0;
  double t_u = 0;
};

struct Assignment {
  std::vector<int> worker_of;  // per job
  std::vector<double> load;    // per worker
  double makespan = 0;
  std::size_t comm_cost = 0;
};

// Bisection on the makespan bound M over [max(total/n, largest), total];
// for each M, jobs are packed largest first, each onto the feasible worker
// with the least added communication cost, then the fullest such worker.
// Throws JobOutOfBounds if a job size lies outside [t_l, t_u].
Assignment gen_assign(const std::vector<Job>& jobs, int n, Bounds bounds);

}  // namespace tgfd
