#include "tgfd/tgfd_parser.hpp"

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "tgfd/error.hpp"
#include "tgfd/graph_io.hpp"

namespace tgfd {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits on ';' outside double quotes.
std::vector<std::string> split_literals(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quoted && c == '\\' && i + 1 < s.size()) {
      cur += c;
      cur += s[++i];
      continue;
    }
    if (c == '"') quoted = !quoted;
    if (c == ';' && !quoted) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  std::vector<std::string> out;
  for (auto& p : parts)
    if (!p.empty()) out.push_back(p);
  return out;
}

AttrRef parse_ref(const std::string& text, int line_no) {
  std::string t = trim(text);
  auto dot = t.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == t.size()) {
    throw SyntaxError(line_no, "expected <var>.<attr>, got '" + t + "'");
  }
  return {t.substr(0, dot), t.substr(dot + 1)};
}

// Strips string comments that begin with '#' outside quotes.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (quoted && line[i] == '\\') {
      ++i;
      continue;
    }
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

Literal parse_literal(const std::string& text, int line_no) {
  std::string t = trim(text);
  auto eq = t.find('=');
  if (eq == std::string::npos) throw SyntaxError(line_no, "literal needs '=' or '==': '" + t + "'");
  if (eq + 1 < t.size() && t[eq + 1] == '=') {
    return VariableLiteral{parse_ref(t.substr(0, eq), line_no), parse_ref(t.substr(eq + 2), line_no)};
  }
  AttrRef ref = parse_ref(t.substr(0, eq), line_no);
  auto tok = tokenize_line(trim(t.substr(eq + 1)), line_no);
  if (tok.size() != 1) throw SyntaxError(line_no, "constant must be a single (quoted) value: '" + t + "'");
  return ConstantLiteral{ref, tok[0]};
}

std::vector<Tgfd> parse_tgfds(std::istream& in) {
  std::vector<Tgfd> rules;
  std::vector<int> header_lines;
  std::vector<bool> has_delta;
  std::string raw;
  int line_no = 0;
  static const std::regex delta_re(R"(delta\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\))");

  auto current = [&]() -> Tgfd& {
    if (rules.empty()) throw SyntaxError(line_no, "statement before any 'tgfd <name>' header");
    return rules.back();
  };
  auto check_vars = [&](const Tgfd& r, const Literal& l) {
    for (const auto& v : literal_vars(l)) {
      if (r.pattern.var_index(v) < 0) throw UnknownVariable(line_no, "unknown variable '" + v + "'");
    }
  };
  auto finish = [&]() {
    if (rules.empty()) return;
    const Tgfd& r = rules.back();
    int at = header_lines.back();
    if (!has_delta.back()) throw SyntaxError(at, r.name + ": missing 'delta (p, q)'");
    if (r.y.empty()) throw EmptyConsequent(at, r.name + ": empty consequent");
    if (!r.pattern.connected()) throw SyntaxError(at, r.name + ": pattern is not connected");
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.rfind("x:", 0) == 0 || line.rfind("y:", 0) == 0) {
      Tgfd& r = current();
      auto& side = line[0] == 'x' ? r.x : r.y;
      for (const auto& part : split_literals(line.substr(2))) {
        Literal l = parse_literal(part, line_no);
        check_vars(r, l);
        side.insert(l);
      }
      continue;
    }
    std::istringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "tgfd") {
      finish();
      std::string name, extra;
      if (!(ss >> name) || (ss >> extra)) throw SyntaxError(line_no, "expected 'tgfd <name>'");
      rules.push_back({});
      rules.back().name = name;
      header_lines.push_back(line_no);
      has_delta.push_back(false);
    } else if (kw == "vertex") {
      std::string var, type, extra;
      if (!(ss >> var >> type) || (ss >> extra)) throw SyntaxError(line_no, "expected 'vertex <var> <type>'");
      Tgfd& r = current();
      if (r.pattern.var_index(var) >= 0) throw SyntaxError(line_no, "duplicate variable '" + var + "'");
      r.pattern.add_node(var, type);
    } else if (kw == "edge") {
      std::string a, label, b, extra;
      if (!(ss >> a >> label >> b) || (ss >> extra)) throw SyntaxError(line_no, "expected 'edge <var> <label> <var>'");
      Tgfd& r = current();
      for (const auto& v : {a, b}) {
        if (r.pattern.var_index(v) < 0) throw UnknownVariable(line_no, "unknown variable '" + v + "'");
      }
      if (a == b) throw SyntaxError(line_no, "self-loop pattern edges are not supported");
      r.pattern.add_edge(a, label, b);
    } else if (kw == "delta") {
      std::smatch m;
      if (!std::regex_match(line, m, delta_re)) throw SyntaxError(line_no, "expected 'delta (<p>, <q>)'");
      Tgfd& r = current();
      r.delta = {std::stoi(m[1]), std::stoi(m[2])};
      if (r.delta.p < 0 || r.delta.p > r.delta.q) {
        throw InvalidDelta(line_no, "interval (" + m[1].str() + ", " + m[2].str() + ") needs 0 <= p <= q");
      }
      has_delta.back() = true;
    } else {
      throw SyntaxError(line_no, "unknown statement '" + kw + "'");
    }
  }
  finish();
  return rules;
}

std::vector<Tgfd> parse_tgfds(const std::string& text) {
  std::istringstream in(text);
  return parse_tgfds(in);
}

std::vector<Tgfd> load_tgfds(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file.string());
  return parse_tgfds(in);
}

std::string format_tgfd(const Tgfd& t) {
  std::ostringstream out;
  out << "tgfd " << t.name << '\n';
  for (const auto& n : t.pattern.nodes()) out << "vertex " << n.var << ' ' << n.label << '\n';
  for (const auto& e : t.pattern.edges()) {
    out << "edge " << t.pattern.var(e.src) << ' ' << e.label << ' ' << t.pattern.var(e.dst) << '\n';
  }
  out << "delta (" << t.delta.p << ", " << t.delta.q << ")\n";
  auto side = [&](const char* tag, const std::set<Literal>& ls) {
    out << tag << ':';
    bool first = true;
    for (const auto& l : ls) {
      out << (first ? " " : "; ") << to_string(l);
      first = false;
    }
    out << '\n';
  };
  side("x", t.x);
  side("y", t.y);
  return out.str();
}

}  // namespace tgfd
