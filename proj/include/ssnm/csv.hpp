#pragma once

/** @file
 * CSV encoding of result tables.
 *
 * Layout: header row "snr_db,<series>[,<series>_se]...", one line per row,
 * '.' decimal separator, 12 significant digits, '\n' line endings. Fields
 * containing a comma, quote or newline are quoted with doubled quotes.
 */

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "ssnm/table.hpp"

namespace ssnm {

inline constexpr const char* kStdErrorSuffix = "_se";

namespace csv_detail {

inline std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::vector<std::string>> split_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      field.clear();
      record.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw InvalidArgument("unterminated quoted CSV field");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

inline double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("malformed CSV number '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("malformed CSV number '" + s + "'");
  return v;
}

}  // namespace csv_detail

inline std::string to_csv(const ResultTable& table) {
  table.validate();
  std::ostringstream out;
  out << "snr_db";
  for (const auto& s : table.series) {
    out << ',' << csv_detail::quote(s.name);
    if (s.std_error) out << ',' << csv_detail::quote(s.name + kStdErrorSuffix);
  }
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out << format_number(table.snr_db[r]);
    for (const auto& s : table.series) {
      out << ',' << format_number(s.values[r]);
      if (s.std_error) out << ',' << format_number((*s.std_error)[r]);
    }
    out << '\n';
  }
  return out.str();
}

/// Inverse of to_csv(); a column "<name>_se" right after "<name>" becomes its std errors.
inline ResultTable parse_csv(const std::string& text) {
  const auto records = csv_detail::split_records(text);
  if (records.empty() || records.front().empty() || records.front().front() != "snr_db")
    throw InvalidArgument("CSV must start with an 'snr_db' header column");
  const auto& header = records.front();
  ResultTable table;
  std::vector<std::pair<std::size_t, bool>> column_map;  // (series index, is std error)
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& name = header[c];
    const std::string suffix = kStdErrorSuffix;
    if (!table.series.empty() && !table.series.back().std_error &&
        name == table.series.back().name + suffix) {
      table.series.back().std_error.emplace();
      column_map.emplace_back(table.series.size() - 1, true);
    } else {
      table.series.push_back({name, {}, std::nullopt});
      column_map.emplace_back(table.series.size() - 1, false);
    }
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size())
      throw InvalidArgument("CSV row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                            " fields, header has " + std::to_string(header.size()));
    table.snr_db.push_back(csv_detail::parse_number(rec[0]));
    for (std::size_t c = 1; c < rec.size(); ++c) {
      const auto [si, is_se] = column_map[c - 1];
      auto& s = table.series[si];
      (is_se ? *s.std_error : s.values).push_back(csv_detail::parse_number(rec[c]));
    }
  }
  table.validate();
  return table;
}

inline void write_csv(const ResultTable& table, const std::filesystem::path& path) {
  if (table.rows() == 0) throw InvalidArgument("refusing to write an empty table");
  write_file_atomic(path, to_csv(table));
}

}  // namespace ssnm
