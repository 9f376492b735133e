#include "eventodist/table.hpp"

#include <fstream>
#include <iostream>
#include <ostream>

#include <json.hpp>

#include "eventodist/errors.hpp"

namespace eventodist {

void OutputTable::add_row(std::vector<std::string> row) {
  if (row.size() != headers.size()) {
    throw InvalidArgument("row has " + std::to_string(row.size()) + " cells, expected " +
                          std::to_string(headers.size()));
  }
  rows.push_back(std::move(row));
}

namespace {

// RFC 4180: quote fields containing separator, quote or line break; double
// embedded quotes.
std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void emit_csv(const OutputTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.headers.size(); ++i) {
    if (i) out << ',';
    out << csv_quote(table.headers[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_quote(row[i]);
    }
    out << '\n';
  }
}

void emit_json(const OutputTable& table, std::ostream& out) {
  if (table.rows.empty()) {
    out << "[]\n";
    return;
  }
  out << "[\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << "  {";
    for (std::size_t i = 0; i < table.headers.size(); ++i) {
      if (i) out << ',';
      out << nlohmann::json(table.headers[i]).dump() << ':';
      const bool numeric = i < table.numeric_column.size() && table.numeric_column[i];
      if (numeric) {
        out << table.rows[r][i];
      } else {
        out << nlohmann::json(table.rows[r][i]).dump();
      }
    }
    out << (r + 1 < table.rows.size() ? "},\n" : "}\n");
  }
  out << "]\n";
}

}  // namespace

void emit(const OutputTable& table, std::ostream& out) {
  if (table.format == OutputTable::Format::csv) {
    emit_csv(table, out);
  } else {
    emit_json(table, out);
  }
  if (!out) throw Error("failed to write output table");
}

void emit_to(const OutputTable& table, const std::string& destination) {
  if (destination == "-") {
    emit(table, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(destination, std::ios::binary);
  if (!file) throw Error("cannot open \"" + destination + "\" for writing");
  emit(table, file);
  file.flush();
  if (!file) throw Error("failed writing \"" + destination + "\"");
}

}  // namespace eventodist
