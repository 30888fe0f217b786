#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace t1cp {

// Empty cell, boolean, integer, real or text.
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class Format { csv, json };

Format parse_format(std::string_view text);

// CSV: header line, then one line per row; reals with 12 significant digits,
// booleans as true/false, empty cells blank. JSON: array of objects keyed by
// column name, empty cells null.
void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);
void write_table(std::ostream& out, const Table& table, Format format);

std::string format_real(double v);

}  // namespace t1cp
