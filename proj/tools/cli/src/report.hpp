#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tlif::cli {

using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

/// Tabular report with metadata, rendered as CSV or JSON from one source so
/// both formats carry identical values.
struct Report {
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
};

/// CSV: a "# key=value ..." metadata line, the header, the rows, then one
/// "# key=value ..." summary line when a summary exists. Doubles use %.17g.
void write_csv(const Report& report, std::ostream& out);

/// JSON object: metadata keys, "rows" (array of objects), summary keys.
/// Doubles use the shortest round-trip form.
void write_json(const Report& report, std::ostream& out);

/// Writes via a temporary file in the same directory plus rename.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace tlif::cli
