#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace eventodist {

/// A rectangular result table with pre-formatted cells. Columns flagged
/// numeric hold valid JSON number literals and are emitted unquoted in the
/// JSON format. Every row must match the header width.
struct OutputTable {
  enum class Format { csv, json };

  std::vector<std::string> headers;
  std::vector<bool> numeric_column;
  std::vector<std::vector<std::string>> rows;
  Format format = Format::csv;

  void add_row(std::vector<std::string> row);
};

/// Writes the table: CSV per RFC 4180 (quoted as needed, LF line endings) or
/// JSON as an array of objects keyed by the headers.
void emit(const OutputTable& table, std::ostream& out);

/// Writes to stdout when destination is "-", else creates/truncates the
/// file. Throws Error on I/O failure.
void emit_to(const OutputTable& table, const std::string& destination);

}  // namespace eventodist
