#include "tgfd/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "tgfd/error.hpp"

namespace tgfd {

std::vector<std::string> tokenize_line(const std::string& line, int line_no) {
  std::vector<std::string> tokens;
  std::string cur;
  bool in_token = false, quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '\\' && i + 1 < line.size() && (line[i + 1] == '"' || line[i + 1] == '\\')) {
        cur += line[++i];
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = in_token = true;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      if (in_token) tokens.push_back(std::move(cur));
      cur.clear();
      in_token = false;
    } else if (c == '#' && !in_token) {
      break;
    } else {
      cur += c;
      in_token = true;
    }
  }
  if (quoted) throw SyntaxError(line_no, "unterminated quote");
  if (in_token) tokens.push_back(std::move(cur));
  return tokens;
}

std::string quote_value(const std::string& value) {
  bool plain = !value.empty();
  for (char c : value) {
    if (c == ' ' || c == '\t' || c == '"' || c == '\\' || c == '#' || c == '=') plain = false;
  }
  if (plain) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

namespace {

std::pair<std::string, std::string> split_assignment(const std::string& tok, int line_no) {
  auto eq = tok.find('=');
  if (eq == std::string::npos || eq == 0) throw SyntaxError(line_no, "expected name=value, got '" + tok + "'");
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

}  // namespace

GraphData parse_snapshot(std::istream& in) {
  GraphData g;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = tokenize_line(line, line_no);
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      if (tok.size() < 3) throw SyntaxError(line_no, "vertex line needs an id and a type");
      VertexRecord v{tok[1], tok[2], {}};
      for (std::size_t i = 3; i < tok.size(); ++i) v.attrs.push_back(split_assignment(tok[i], line_no));
      g.vertices.push_back(std::move(v));
    } else if (tok[0] == "e") {
      if (tok.size() != 4) throw SyntaxError(line_no, "edge line needs src, label and dst");
      g.edges.push_back({tok[1], tok[2], tok[3]});
    } else {
      throw SyntaxError(line_no, "unknown record '" + tok[0] + "'");
    }
  }
  return g;
}

std::vector<ChangeSet> parse_changes(std::istream& in) {
  std::vector<ChangeSet> sets;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = tokenize_line(line, line_no);
    if (tok.empty()) continue;
    const std::string& op = tok[0];
    if (op == "t") {
      if (tok.size() != 2) throw SyntaxError(line_no, "timestamp header is 't <k>'");
      int t = 0;
      try {
        t = std::stoi(tok[1]);
      } catch (const std::exception&) {
        throw SyntaxError(line_no, "bad timestamp '" + tok[1] + "'");
      }
      int last = sets.empty() ? 1 : sets.back().t;
      if (t <= last) throw SyntaxError(line_no, "timestamps must increase and start at 2");
      for (int k = last + 1; k < t; ++k) sets.push_back({k, {}});
      sets.push_back({t, {}});
      continue;
    }
    if (sets.empty()) throw SyntaxError(line_no, "change before any 't <k>' header");
    auto& changes = sets.back().changes;
    if (op == "+e" || op == "-e") {
      if (tok.size() != 4) throw SyntaxError(line_no, "edge change needs src, label and dst");
      if (op == "+e")
        changes.push_back(EdgeInsert{tok[1], tok[2], tok[3]});
      else
        changes.push_back(EdgeDelete{tok[1], tok[2], tok[3]});
    } else if (op == "+a") {
      if (tok.size() != 3) throw SyntaxError(line_no, "'+a <vid> <name>=<value>'");
      auto [name, value] = split_assignment(tok[2], line_no);
      changes.push_back(AttrSet{tok[1], name, value});
    } else if (op == "-a") {
      if (tok.size() != 3) throw SyntaxError(line_no, "'-a <vid> <name>'");
      changes.push_back(AttrDelete{tok[1], tok[2]});
    } else {
      throw SyntaxError(line_no, "unknown change '" + op + "'");
    }
  }
  return sets;
}

void write_snapshot(std::ostream& out, const GraphData& g) {
  for (const auto& v : g.vertices) {
    out << "v " << quote_value(v.id) << ' ' << quote_value(v.type);
    for (const auto& [name, value] : v.attrs) out << ' ' << name << '=' << quote_value(value);
    out << '\n';
  }
  for (const auto& e : g.edges)
    out << "e " << quote_value(e.src) << ' ' << quote_value(e.label) << ' ' << quote_value(e.dst) << '\n';
}

void write_changes(std::ostream& out, const std::vector<ChangeSet>& changes) {
  for (const auto& cs : changes) {
    out << "t " << cs.t << '\n';
    for (const auto& c : cs.changes) {
      std::visit(
          [&](const auto& ch) {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, EdgeInsert>) {
              out << "+e " << quote_value(ch.src) << ' ' << quote_value(ch.label) << ' ' << quote_value(ch.dst) << '\n';
            } else if constexpr (std::is_same_v<T, EdgeDelete>) {
              out << "-e " << quote_value(ch.src) << ' ' << quote_value(ch.label) << ' ' << quote_value(ch.dst) << '\n';
            } else if constexpr (std::is_same_v<T, AttrSet>) {
              out << "+a " << quote_value(ch.vertex) << ' ' << ch.name << '=' << quote_value(ch.value) << '\n';
            } else {
              out << "-a " << quote_value(ch.vertex) << ' ' << ch.name << '\n';
            }
          },
          c);
    }
  }
}

TemporalGraph load_temporal_graph(const std::filesystem::path& graph_file, const std::filesystem::path& change_file) {
  std::ifstream gin(graph_file);
  if (!gin) throw Error("cannot open " + graph_file.string());
  TemporalGraph g(parse_snapshot(gin));
  if (!change_file.empty()) {
    std::ifstream cin(change_file);
    if (!cin) throw Error("cannot open " + change_file.string());
    for (const auto& cs : parse_changes(cin)) g.apply_changes(cs);
  }
  return g;
}

}  // namespace tgfd
