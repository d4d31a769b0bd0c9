#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tgfd/model.hpp"

namespace tgfd {

// Rule file grammar, one statement per line:
//   tgfd <name>
//   vertex <var> <type>          (type "_" is a wildcard)
//   edge <var> <label> <var>
//   delta (<p>, <q>)
//   x: <literal>; <literal>...   (may be empty)
//   y: <literal>; <literal>...
// with literals `v.a = "c"` or `v.a == w.b`. Lines starting with # are comments.
// Rules are returned as written; call normalize() to split multi-literal Y.
std::vector<Tgfd> parse_tgfds(std::istream& in);
std::vector<Tgfd> parse_tgfds(const std::string& text);
std::vector<Tgfd> load_tgfds(const std::filesystem::path& file);

Literal parse_literal(const std::string& text, int line_no = 0);

// Writes rules back in the same grammar.
std::string format_tgfd(const Tgfd& t);

}  // namespace tgfd
