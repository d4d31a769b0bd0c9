#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tgfd/detection.hpp"

namespace tgfd {

// <tgfd> PAIR t_i=<i> t_j=<j> <binding_i> <binding_j>
// <tgfd> CONST t=<t> <binding> failed=<literal>
// where a binding prints as var=vertex,var=vertex,...
std::string format_violation(const Violation& v, const std::vector<Tgfd>& rules, const TemporalGraph& g);

void write_text_report(std::ostream& out, const DetectionResult& r, const std::vector<Tgfd>& rules,
                       const TemporalGraph& g);

// Structured form; see docs/report_format.md.
void write_json_report(std::ostream& out, const DetectionResult& r, const std::vector<Tgfd>& rules,
                       const TemporalGraph& g);

}  // namespace tgfd
