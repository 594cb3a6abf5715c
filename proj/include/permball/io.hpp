// Copyright 2026 The permball Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Tabular output. A table is a list of '#'-prefixed metadata lines, a
// header row and data rows. The data section (header plus rows) is fully
// determined by the inputs; anything run-dependent such as timestamps goes
// in the metadata.
//
// Every table the tools emit has a schema, and parse_csv() + validate()
// accept exactly what write_csv() produces.

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "permball/errors.hpp"

namespace permball {

// Shortest decimal form that reads back to the same double.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("format_real failed");
  return std::string(buf, ptr);
}

struct Table {
  std::vector<std::string> metadata;  // written as "# <line>"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return k;
    throw ValidationError("no column named '" + std::string(name) + "'");
  }
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          cur += '"';
          ++k;
        } else {
          quoted = false;
        }
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
  if (quoted) throw ValidationError("unterminated quote on line " + std::to_string(line_no));
  out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Table& t) {
  for (const auto& m : t.metadata) os << "# " << m << '\n';
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << detail::csv_field(row[k]);
    os << '\n';
  };
  write_row(t.header);
  for (const auto& row : t.rows) write_row(row);
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

// Header plus rows only.
inline std::string data_section(const Table& t) {
  Table bare = t;
  bare.metadata.clear();
  return to_csv(bare);
}

inline Table parse_csv(std::istream& is) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header && line.starts_with("#")) {
      std::string_view body(line);
      body.remove_prefix(1);
      if (body.starts_with(" ")) body.remove_prefix(1);
      t.metadata.emplace_back(body);
      continue;
    }
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line, line_no);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != t.header.size()) {
        throw ValidationError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                              " fields, header has " + std::to_string(t.header.size()));
      }
      t.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw ValidationError("CSV has no header row");
  return t;
}

inline Table parse_csv(const std::string& text) {
  std::istringstream is(text);
  return parse_csv(is);
}

// ---------------------------------------------------------------------------
// Schemas.

enum class ColumnType { integer, real, count, text, boolean };

struct Column {
  std::string name;
  ColumnType type = ColumnType::text;
  bool nullable = false;
};

struct Schema {
  std::string name;
  std::vector<Column> columns;

  std::vector<std::string> header() const {
    std::vector<std::string> h;
    for (const auto& c : columns) h.push_back(c.name);
    return h;
  }
};

namespace detail {

inline bool cell_matches(const std::string& s, ColumnType type) {
  switch (type) {
    case ColumnType::integer: {
      long long v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc() && p == s.data() + s.size();
    }
    case ColumnType::real: {
      if (s == "nan" || s == "inf" || s == "-inf") return true;
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc() && p == s.data() + s.size();
    }
    case ColumnType::count:
      return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
    case ColumnType::boolean:
      return s == "true" || s == "false";
    case ColumnType::text:
      return true;
  }
  return false;
}

}  // namespace detail

// Throws ValidationError naming the first offending cell.
inline void validate(const Table& t, const Schema& schema) {
  if (t.header != schema.header()) throw ValidationError("header does not match schema '" + schema.name + "'");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const std::string& cell = t.rows[r][c];
      const Column& col = schema.columns[c];
      if (cell.empty() && col.nullable) continue;
      if (!detail::cell_matches(cell, col.type)) {
        throw ValidationError("schema '" + schema.name + "': row " + std::to_string(r + 1) + " column '" +
                              col.name + "' has invalid value '" + cell + "'");
      }
    }
  }
}

inline double parse_real(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ValidationError("not a real: '" + s + "'");
  return v;
}

// {"metadata": [...], "schema": name, "rows": [{column: value}, ...]} with
// typed values; counts stay decimal strings and empty cells become null.
inline nlohmann::ordered_json to_json(const Table& t, const Schema& schema) {
  validate(t, schema);
  nlohmann::ordered_json out;
  out["schema"] = schema.name;
  out["metadata"] = t.metadata;
  out["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const std::string& cell = row[c];
      const Column& col = schema.columns[c];
      if (cell.empty() && col.nullable) {
        obj[col.name] = nullptr;
        continue;
      }
      switch (col.type) {
        case ColumnType::integer: obj[col.name] = std::stoll(cell); break;
        case ColumnType::real: obj[col.name] = parse_real(cell); break;
        case ColumnType::boolean: obj[col.name] = cell == "true"; break;
        case ColumnType::count:
        case ColumnType::text: obj[col.name] = cell; break;
      }
    }
    out["rows"].push_back(std::move(obj));
  }
  return out;
}

// Inverse of to_json() for tables whose reals were written by format_real.
inline Table from_json(const nlohmann::ordered_json& j, const Schema& schema) {
  if (j.value("schema", std::string()) != schema.name) throw ValidationError("JSON schema mismatch");
  Table t;
  t.header = schema.header();
  for (const auto& m : j.at("metadata")) t.metadata.push_back(m.get<std::string>());
  for (const auto& obj : j.at("rows")) {
    std::vector<std::string> row;
    for (const auto& col : schema.columns) {
      const auto& v = obj.at(col.name);
      if (v.is_null()) {
        row.emplace_back();
      } else if (col.type == ColumnType::integer) {
        row.push_back(std::to_string(v.get<long long>()));
      } else if (col.type == ColumnType::real) {
        row.push_back(format_real(v.get<double>()));
      } else if (col.type == ColumnType::boolean) {
        row.push_back(v.get<bool>() ? "true" : "false");
      } else {
        row.push_back(v.get<std::string>());
      }
    }
    t.rows.push_back(std::move(row));
  }
  validate(t, schema);
  return t;
}

namespace schemas {

inline Schema bound() {
  return {"bound",
          {{"family", ColumnType::text},
           {"direction", ColumnType::text},
           {"n", ColumnType::integer},
           {"r", ColumnType::integer},
           {"bits", ColumnType::real, true},
           {"valid", ColumnType::boolean}}};
}

inline Schema sweep() {
  return {"sweep",
          {{"n", ColumnType::integer},
           {"r", ColumnType::integer},
           {"rho", ColumnType::real},
           {"family", ColumnType::text},
           {"direction", ColumnType::text},
           {"bits", ColumnType::real, true},
           {"valid", ColumnType::boolean},
           {"reason", ColumnType::text, true},
           {"exact_count", ColumnType::count, true},
           {"log2_exact", ColumnType::real, true},
           {"backend", ColumnType::text, true},
           {"status", ColumnType::text}}};
}

inline Schema gap_curve() {
  return {"gap_curve", {{"pair", ColumnType::text}, {"rho", ColumnType::real}, {"gap_bits", ColumnType::real}}};
}

inline Schema rate() {
  return {"rate",
          {{"kind", ColumnType::text},
           {"x", ColumnType::real},
           {"rate_bits", ColumnType::real},
           {"mode", ColumnType::text},
           {"n", ColumnType::integer, true}}};
}

inline Schema fig1_wide() {
  return {"fig1",
          {{"rho", ColumnType::real},
           {"phi1", ColumnType::real, true},
           {"phi1_prime", ColumnType::real, true},
           {"phi2", ColumnType::real, true},
           {"phi3", ColumnType::real, true}}};
}

inline Schema fig2_wide() {
  return {"fig2",
          {{"delta", ColumnType::real},
           {"ecc_old", ColumnType::real},
           {"ecc_new", ColumnType::real},
           {"improvement", ColumnType::real},
           {"code_anticode", ColumnType::text}}};
}

inline Schema fig3_wide() {
  return {"fig3",
          {{"rho", ColumnType::real},
           {"cover_old", ColumnType::real},
           {"cover_new", ColumnType::real},
           {"improvement", ColumnType::real},
           {"construction", ColumnType::text}}};
}

inline Schema triplet() {
  return {"triplet", {{"i", ColumnType::integer}, {"j", ColumnType::integer}, {"value", ColumnType::real}}};
}

inline Schema dense_grid(int n) {
  Schema s{"dense_grid", {{"row", ColumnType::integer}}};
  for (int j = 1; j <= n; ++j) s.columns.push_back({"c" + std::to_string(j), ColumnType::real});
  return s;
}

inline Schema verify() {
  return {"verify",
          {{"check", ColumnType::text},
           {"status", ColumnType::text},
           {"seconds", ColumnType::real},
           {"detail", ColumnType::text, true}}};
}

}  // namespace schemas

}  // namespace permball
