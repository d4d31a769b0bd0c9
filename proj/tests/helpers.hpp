#pragma once

#include <sstream>
#include <string>

#include "tgfd/graph_io.hpp"
#include "tgfd/temporal_graph.hpp"

#ifndef TGFD_FIXTURES
#define TGFD_FIXTURES "tests/fixtures"
#endif

namespace testutil {

inline const std::string kFixtures = TGFD_FIXTURES;

inline tgfd::TemporalGraph graph(const std::string& snapshot, const std::string& changes = "") {
  std::istringstream s(snapshot), c(changes);
  tgfd::TemporalGraph g(tgfd::parse_snapshot(s));
  for (const auto& cs : tgfd::parse_changes(c)) g.apply_changes(cs);
  return g;
}

inline tgfd::VertexIndex vid(const tgfd::TemporalGraph& g, const std::string& id) { return g.context().resolve(id); }

}  // namespace testutil
