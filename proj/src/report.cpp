#include "tgfd/report.hpp"

#include <ostream>

#include "json.hpp"

namespace tgfd {

namespace {

const Tgfd* find_rule(const std::vector<Tgfd>& rules, const std::string& name) {
  for (const auto& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

nlohmann::json binding_json(const GraphPattern& q, const TemporalGraph& g, const Binding& b) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < b.size(); ++i) j[q.nodes()[i].var] = g.context().ids[b[i]];
  return j;
}

}  // namespace

std::string format_violation(const Violation& v, const std::vector<Tgfd>& rules, const TemporalGraph& g) {
  const Tgfd* rule = find_rule(rules, violation_tgfd(v));
  GraphPattern empty;
  const GraphPattern& q = rule ? rule->pattern : empty;
  const Snapshot& s = g.snapshot(1);
  if (auto* p = std::get_if<PairViolation>(&v)) {
    return p->tgfd + " PAIR t_i=" + std::to_string(p->t_i) + " t_j=" + std::to_string(p->t_j) + " " +
           format_binding(q, s, p->b_i) + " " + format_binding(q, s, p->b_j);
  }
  const auto& c = std::get<ConstantViolation>(v);
  return c.tgfd + " CONST t=" + std::to_string(c.t) + " " + format_binding(q, s, c.b) + " failed=" + c.failed;
}

void write_text_report(std::ostream& out, const DetectionResult& r, const std::vector<Tgfd>& rules,
                       const TemporalGraph& g) {
  for (const auto& v : r.violations) out << format_violation(v, rules, g) << '\n';
}

void write_json_report(std::ostream& out, const DetectionResult& r, const std::vector<Tgfd>& rules,
                       const TemporalGraph& g) {
  nlohmann::json doc;
  doc["snapshots"] = g.T();
  doc["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations) {
    const Tgfd* rule = find_rule(rules, violation_tgfd(v));
    GraphPattern empty;
    const GraphPattern& q = rule ? rule->pattern : empty;
    nlohmann::json j;
    if (auto* p = std::get_if<PairViolation>(&v)) {
      j = {{"tgfd", p->tgfd},
           {"kind", "pair"},
           {"t_i", p->t_i},
           {"t_j", p->t_j},
           {"binding_i", binding_json(q, g, p->b_i)},
           {"binding_j", binding_json(q, g, p->b_j)}};
    } else {
      const auto& c = std::get<ConstantViolation>(v);
      j = {{"tgfd", c.tgfd}, {"kind", "constant"}, {"t", c.t}, {"binding", binding_json(q, g, c.b)},
           {"failed", c.failed}};
    }
    doc["violations"].push_back(std::move(j));
  }
  doc["rules"] = nlohmann::json::array();
  for (const auto& s : r.stats) {
    doc["rules"].push_back({{"tgfd", s.tgfd},
                            {"nontrivial", s.nontrivial},
                            {"matches", s.matches},
                            {"isomorphism_searches", s.isomorphism_searches}});
  }
  out << doc.dump(2) << '\n';
}

}  // namespace tgfd
