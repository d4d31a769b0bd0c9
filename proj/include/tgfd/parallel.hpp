#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "tgfd/detection.hpp"
#include "tgfd/workload.hpp"

namespace tgfd {

enum class TimeModel {
  kWall,  // measured wall-clock seconds
  kSize,  // a job's time is its re-estimated size at the superstep
};

struct ParallelOptions {
  int workers = 1;
  double zeta = 0.1;
  // t_u <= 0 derives the bounds from the initial jobs: [smallest, largest].
  Bounds bounds;
  TimeModel time_model = TimeModel::kSize;
  // owner per vertex; empty means a seeded random balanced split.
  std::vector<int> partition;
  std::uint64_t seed = 1;
  std::set<Timestamp> force_rebalance_at;
  // Size-model cost of moving one edge during a rebalance, in job-size units.
  double ship_cost_per_edge = 0.05;
  bool record_validated_pairs = false;
  bool use_threads = true;
};

struct WorkerStep {
  int worker = 0;
  std::size_t jobs = 0;
  double time = 0;
  std::size_t shipped_edges = 0;
  std::size_t matches = 0;
  std::size_t local_violations = 0;
};

struct SuperstepReport {
  Timestamp t = 0;
  std::vector<WorkerStep> workers;
  std::vector<double> job_times;
  double makespan = 0;
  std::size_t coordinator_violations = 0;
};

struct RebalanceEvent {
  Timestamp t = 0;  // superstep after which the rebalance ran
  std::string trigger;
  std::size_t jobs_before = 0;
  std::size_t jobs_after = 0;
  std::size_t relocated_edges = 0;
  double overhead = 0;
};

struct ValidatedPair {
  std::string tgfd;
  MatchRef first;
  MatchRef second;
};

struct JobPlan {
  std::vector<Job> jobs;
  Assignment assignment;
  Bounds bounds;
  std::vector<int> partition;
};

struct RunReport {
  std::vector<Violation> violations;  // sorted, unique
  std::vector<SuperstepReport> supersteps;
  std::vector<RebalanceEvent> rebalances;
  std::vector<ValidatedPair> coordinator_pairs;  // only with record_validated_pairs
  JobPlan initial;
  Bounds final_bounds;
  double simulated_time = 0;
  double rebalance_overhead = 0;
  double overhead_fraction() const { return simulated_time > 0 ? rebalance_overhead / simulated_time : 0; }
};

std::vector<int> balanced_partition(std::size_t vertices, int workers, std::uint64_t seed);

// Jobs for every (rule, fragment) at snapshot t, split until each fits t_u
// where possible, and their assignment. Bounds are widened to cover jobs
// that cannot be split further.
JobPlan plan_jobs(const TemporalGraph& g, const std::vector<Tgfd>& rules, const ParallelOptions& opts,
                  Timestamp t = 1);

// Workers own the matches whose anchor (pattern center) they are assigned;
// each keeps a view of the balls around its anchors, matches incrementally
// and pairs its own matches. The coordinator pairs matches from different
// workers. Rules are normalized first.
RunReport run_parallel(const TemporalGraph& g, const std::vector<Tgfd>& rules, const ParallelOptions& opts);

}  // namespace tgfd
