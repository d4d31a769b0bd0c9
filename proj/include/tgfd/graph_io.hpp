#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tgfd/temporal_graph.hpp"

namespace tgfd {

// Splits on whitespace; double quotes group text and may appear mid-token
// (name="a b"). Inside quotes, \" and \\ are escapes. Throws SyntaxError on
// an unterminated quote.
std::vector<std::string> tokenize_line(const std::string& line, int line_no);

// Quotes a value if it contains whitespace, quotes, or is empty.
std::string quote_value(const std::string& value);

// v <id> <type> [name=value]...
// e <src> <label> <dst>
GraphData parse_snapshot(std::istream& in);

// t <k>, then +e/-e <src> <label> <dst>, +a <vid> <name>=<value>, -a <vid> <name>.
// Missing timestamps between blocks become empty change sets.
std::vector<ChangeSet> parse_changes(std::istream& in);

void write_snapshot(std::ostream& out, const GraphData& g);
void write_changes(std::ostream& out, const std::vector<ChangeSet>& changes);

TemporalGraph load_temporal_graph(const std::filesystem::path& graph_file,
                                  const std::filesystem::path& change_file = {});

}  // namespace tgfd
