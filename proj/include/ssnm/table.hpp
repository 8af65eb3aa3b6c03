#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ssnm/error.hpp"

namespace ssnm {

/// One named column of a result table, optionally with Monte Carlo standard errors.
struct Series {
  std::string name;
  std::vector<double> values;
  std::optional<std::vector<double>> std_error;
};

/// Rows keyed by SNR (dB), ascending; every series has one value per row.
struct ResultTable {
  std::vector<double> snr_db;
  std::vector<Series> series;

  std::size_t rows() const noexcept { return snr_db.size(); }

  const Series& at(const std::string& name) const {
    for (const auto& s : series)
      if (s.name == name) return s;
    throw InvalidArgument("no series named '" + name + "'");
  }

  void validate() const {
    if (!std::is_sorted(snr_db.begin(), snr_db.end()))
      throw InvalidArgument("result rows are not sorted by SNR");
    for (const auto& s : series) {
      if (s.values.size() != rows() || (s.std_error && s.std_error->size() != rows()))
        throw InvalidArgument("series '" + s.name + "' does not have one cell per row");
    }
  }

  /// Reorders rows by ascending SNR.
  void sort_rows() {
    std::vector<std::size_t> idx(rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return snr_db[a] < snr_db[b]; });
    auto permute = [&idx](std::vector<double>& v) {
      std::vector<double> out(v.size());
      for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
      v = std::move(out);
    };
    permute(snr_db);
    for (auto& s : series) {
      permute(s.values);
      if (s.std_error) permute(*s.std_error);
    }
  }
};

/// printf("%.*g") with @p digits significant digits.
inline std::string format_number(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// Writes @p content to a sibling temp file and renames it over @p path.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace ssnm
