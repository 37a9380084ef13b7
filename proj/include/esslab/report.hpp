#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>


namespace esslab {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Column-oriented report. CSV carries the rows only; JSON carries rows and `meta`.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Verdict block as (key, value) pairs in insertion order.
  std::vector<std::pair<std::string, Cell>> meta;

  void add_row(std::vector<Cell> row);
  void set_meta(std::string key, Cell value);
};

/// Doubles use %.17g so that parsing recovers the same bits; non-finite values are
/// written as inf, -inf, nan.
std::string format_cell(const Cell& cell);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// Inverse of to_csv (meta is empty). Cells are typed by content: integer, number,
/// true/false, else string.
Table parse_csv(std::string_view text);
Table parse_json(std::string_view text);

bool cells_equal(const Cell& a, const Cell& b);
bool rows_equal(const Table& a, const Table& b);

}  // namespace esslab
