#include "esslab/report.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "esslab/errors.hpp"
#include "json.hpp"

namespace esslab {

using nlohmann::json;

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw InvalidInput("report row has " + std::to_string(row.size()) + " cells, expected " +
                       std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void Table::set_meta(std::string key, Cell value) {
  for (auto& [k, v] : meta) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  meta.emplace_back(std::move(key), std::move(value));
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

Cell infer_cell(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.empty()) return s;
  char* end = nullptr;
  errno = 0;
  if (s == "-0") return -0.0;
  const long long i = std::strtoll(s.c_str(), &end, 10);
  if (*end == '\0' && errno == 0) return static_cast<std::int64_t>(i);
  const double d = std::strtod(s.c_str(), &end);
  if (*end == '\0') return d;
  return s;
}

json cell_to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v);
          return v;
        } else {
          return v;
        }
      },
      c);
}

Cell cell_from_json(const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  throw FileFormatError("json", "unsupported report cell " + j.dump());
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          if (!needs_quotes(v)) return v;
          std::string q = "\"";
          for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
          return q + "\"";
        }
      },
      cell);
}

std::string to_csv(const Table& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << format_cell(Cell{table.columns[i]});
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string to_json(const Table& table) {
  json j;
  j["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_to_json(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  json meta = json::array();
  for (const auto& [k, v] : table.meta) meta.push_back(json::array({k, cell_to_json(v)}));
  j["meta"] = std::move(meta);
  return j.dump(2) + "\n";
}

Table parse_csv(std::string_view text) {
  Table t;
  std::istringstream is{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (header) {
      t.columns = std::move(fields);
      header = false;
      continue;
    }
    std::vector<Cell> row;
    for (const auto& f : fields) row.push_back(infer_cell(f));
    t.add_row(std::move(row));
  }
  return t;
}

Table parse_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FileFormatError("byte " + std::to_string(e.byte), e.what());
  }
  Table t;
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) row.push_back(cell_from_json(c));
    t.add_row(std::move(row));
  }
  if (j.contains("meta")) {
    for (const auto& kv : j["meta"]) t.set_meta(kv.at(0).get<std::string>(), cell_from_json(kv.at(1)));
  }
  return t;
}

bool cells_equal(const Cell& a, const Cell& b) {
  auto as_number = [](const Cell& c, double& out) {
    if (const auto* d = std::get_if<double>(&c)) {
      out = *d;
      return true;
    }
    if (const auto* i = std::get_if<std::int64_t>(&c)) {
      out = static_cast<double>(*i);
      return true;
    }
    return false;
  };
  double x = 0.0, y = 0.0;
  if (as_number(a, x) && as_number(b, y)) {
    if (std::isnan(x) || std::isnan(y)) return std::isnan(x) && std::isnan(y);
    return x == y && std::signbit(x) == std::signbit(y);
  }
  return a == b;
}

bool rows_equal(const Table& a, const Table& b) {
  if (a.columns != b.columns || a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].size() != b.rows[i].size()) return false;
    for (std::size_t k = 0; k < a.rows[i].size(); ++k) {
      if (!cells_equal(a.rows[i][k], b.rows[i][k])) return false;
    }
  }
  return true;
}

}  // namespace esslab
