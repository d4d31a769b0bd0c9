#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgfd/detection.hpp"
#include "tgfd/model.hpp"
#include "tgfd/temporal_graph.hpp"

namespace tgfd {

enum class ChangeProfile { kUniform, kSkewedAU, kSkewedED, kSkewedEI };

ChangeProfile parse_profile(const std::string& name);
std::string profile_name(ChangeProfile p);

struct ChangeMix {
  std::size_t attr_updates = 0;
  std::size_t edge_deletes = 0;
  std::size_t edge_inserts = 0;
};

// Edge changes are rounded to the nearest integer; the remainder goes to
// attribute updates.
ChangeMix split_changes(std::size_t count, ChangeProfile p);

struct SynthParams {
  std::size_t vertices = 100;
  std::size_t edges = 300;
  int types = 3;
  int labels = 3;
  int attrs = 2;
  int domain = 4;  // distinct values per attribute
  int T = 5;
  double chg_rate = 0.04;  // changes per timestamp, as a share of the edge count
  ChangeProfile profile = ChangeProfile::kUniform;
  std::uint64_t seed = 1;
  // Vertex ids the changes are confined to; empty means the whole graph.
  std::vector<std::string> hotspot;
};

struct SyntheticGraph {
  GraphData base;
  std::vector<ChangeSet> changes;  // timestamps 2..T
};

// Vertex ids v0.., types T0.., labels l0.., attributes a0.. with values c0..
SyntheticGraph generate_synthetic(const SynthParams& params);

TemporalGraph build_graph(const GraphData& base, const std::vector<ChangeSet>& changes);

// Every violation by direct enumeration: all match pairs whose gap lies in
// the interval, literals checked with pair_satisfies. Rules are normalized.
std::vector<Violation> enumerate_violations(const TemporalGraph& g, const std::vector<Tgfd>& rules);

struct Mutation {
  Timestamp t = 0;
  std::string vertex;
  std::string attr;
  std::string value;     // value during snapshot t
  std::string restored;  // value from t+1 on; unused when t = T
  bool positive = true;
};

struct InjectionLedger {
  std::vector<Violation> sampled_positive;  // one per sampled pair
  std::vector<Violation> gamma_plus;        // every violation the mutations introduced
  std::vector<Violation> gamma_minus;       // sampled pairs kept consistent
  std::vector<Violation> baseline;          // violations already in the clean graph
  std::vector<Mutation> mutations;
  std::size_t pool = 0;
  std::size_t requested_positive = 0;
  std::size_t requested_negative = 0;
  bool insufficient = false;
  bool negative_fallback = false;  // some negative value was not taken from another rule's X

  // Share of gamma_plus whose two members lie in different snapshots.
  double cross_snapshot_fraction() const;
};

struct InjectOptions {
  double err_rate = 0.03;
  bool positive = true;
  bool negative = false;
  std::uint64_t seed = 1;
  bool strict = false;  // throw InsufficientPairs instead of flagging
};

struct Injected {
  GraphData base;
  std::vector<ChangeSet> changes;
  InjectionLedger ledger;
};

Injected inject_errors(const GraphData& base, const std::vector<ChangeSet>& changes, const std::vector<Tgfd>& rules,
                       const InjectOptions& opts);

struct Metrics {
  double precision = 1;
  double recall = 1;
  double f1 = 1;
  std::optional<double> fpr;  // only when gamma_minus is nonempty
  std::size_t detected = 0;
  std::size_t true_positives = 0;
};

// Baseline violations are left out of the detected set before counting.
Metrics score(const std::vector<Violation>& detected, const InjectionLedger& ledger);

// Audit listing; rules must be the normalized rules and g the mutated graph.
void write_ledger(std::ostream& out, const InjectionLedger& ledger, const std::vector<Tgfd>& rules,
                  const TemporalGraph& g);

}  // namespace tgfd
