#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cylink/algebra/weights.hpp"
#include "cylink/errors.hpp"

namespace cylink::pipeline {

/// Sorted weight tuple; the join key between datasets.
inline Weights canonical(Weights w) {
  std::sort(w.begin(), w.end());
  return w;
}

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    else if (c == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline bool parse_long(const std::string& s, long& v) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    v = std::stol(s, &used);
  } catch (...) {
    return false;
  }
  return used == s.size();
}

}  // namespace detail

/// Rows of a CSV file with its header; blank lines and '#' comments skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  }
};

/// Reads a CSV file. When `header_required` is false and the first row is
/// numeric, it is treated as data and the header is left empty.
inline CsvTable read_csv(const std::string& path, bool header_required = true) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot read " + path);
  CsvTable t;
  std::string line;
  std::size_t n = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++n;
    auto s = detail::trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto fields = detail::split(s);
    if (first) {
      first = false;
      long v;
      if (header_required || !detail::parse_long(fields[0], v)) {
        t.header = fields;
        continue;
      }
    }
    t.rows.push_back(std::move(fields));
    t.line_numbers.push_back(n);
  }
  return t;
}

struct WeightRow {
  Weights w{};
  std::optional<long> h21_cy;
  std::size_t line = 0;
};

/// Weight-system list: columns w1..w5 and an optional h21_cy; header optional.
inline std::vector<WeightRow> read_weights_file(const std::string& path) {
  auto t = read_csv(path, false);
  std::array<std::size_t, num_vars> cols{0, 1, 2, 3, 4};
  std::optional<std::size_t> hcol;
  if (!t.header.empty()) {
    for (std::size_t i = 0; i < num_vars; ++i) {
      auto c = t.column("w" + std::to_string(i + 1));
      if (!c) throw parse_error(path + ": missing column w" + std::to_string(i + 1));
      cols[i] = *c;
    }
    hcol = t.column("h21_cy");
  } else if (!t.rows.empty() && t.rows[0].size() >= 6) {
    hcol = 5;
  }
  std::vector<WeightRow> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& f = t.rows[r];
    WeightRow row;
    row.line = t.line_numbers[r];
    for (std::size_t i = 0; i < num_vars; ++i) {
      long v;
      if (cols[i] >= f.size() || !detail::parse_long(f[cols[i]], v) || v < 1)
        throw parse_error(path + ":" + std::to_string(row.line) + ": weight w" + std::to_string(i + 1) + " is not a positive integer");
      row.w[i] = v;
    }
    if (hcol && *hcol < f.size() && !f[*hcol].empty()) {
      long v;
      if (!detail::parse_long(f[*hcol], v)) throw parse_error(path + ":" + std::to_string(row.line) + ": bad h21_cy");
      row.h21_cy = v;
    }
    out.push_back(row);
  }
  return out;
}

/// Externally known Calabi-Yau h21 values keyed by canonical weights.
struct CyHodgeTable {
  std::map<Weights, long> h21;
  std::vector<std::string> warnings;
};

/// Invariants from another source (e.g. a published dataset), keyed by canonical weights.
struct PublishedRecord {
  Weights w{};
  std::optional<long> gb_length, mu, h30, h21, nu;
};

struct PublishedTable {
  std::map<Weights, PublishedRecord> rows;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::array<std::size_t, num_vars> weight_columns(const std::string& path, const CsvTable& t) {
  std::array<std::size_t, num_vars> cols{0, 1, 2, 3, 4};
  if (t.header.empty()) return cols;
  for (std::size_t i = 0; i < num_vars; ++i) {
    auto c = t.column("w" + std::to_string(i + 1));
    if (!c) throw parse_error(path + ": missing column w" + std::to_string(i + 1));
    cols[i] = *c;
  }
  return cols;
}

template <class Fill>
void ingest_rows(const std::string& path, const CsvTable& t, Fill&& fill) {
  auto cols = weight_columns(path, t);
  std::map<Weights, std::size_t> first_line;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& f = t.rows[r];
    const std::size_t line = t.line_numbers[r];
    Weights w{};
    for (std::size_t i = 0; i < num_vars; ++i) {
      long v;
      if (cols[i] >= f.size() || !parse_long(f[cols[i]], v) || v < 1)
        throw parse_error(path + ":" + std::to_string(line) + ": w" + std::to_string(i + 1) + " is not a positive integer");
      w[i] = v;
    }
    Weights key = canonical(w);
    auto [it, fresh] = first_line.emplace(key, line);
    if (!fresh)
      throw parse_error(path + ": weight tuple " + to_string(key) + " appears on lines " + std::to_string(it->second) + " and " +
                        std::to_string(line));
    fill(key, f, line);
  }
}

}  // namespace detail

/// CSV with columns w1..w5,h21_cy; without a header the columns are taken in that order.
inline CyHodgeTable ingest_cy_hodge(const std::string& path) {
  auto t = read_csv(path, false);
  CyHodgeTable out;
  if (t.header.empty() && t.rows.empty()) {
    out.warnings.push_back(path + " is empty");
    return out;
  }
  auto hc = t.header.empty() ? std::optional<std::size_t>(5) : t.column("h21_cy");
  if (!hc) throw parse_error(path + ": missing column h21_cy");
  detail::ingest_rows(path, t, [&](const Weights& key, const std::vector<std::string>& f, std::size_t line) {
    long v;
    if (*hc >= f.size() || !detail::parse_long(f[*hc], v) || v < 0)
      throw parse_error(path + ":" + std::to_string(line) + ": h21_cy is not a non-negative integer");
    out.h21[key] = v;
  });
  if (out.h21.empty()) out.warnings.push_back(path + " has no data rows");
  return out;
}

/// CSV with columns w1..w5 and any of gb_length, mu, h30, h21, nu
/// (the invariant record layout). Empty cells are missing values.
inline PublishedTable ingest_published_invariants(const std::string& path) {
  auto t = read_csv(path, true);
  PublishedTable out;
  if (t.header.empty() && t.rows.empty()) {
    out.warnings.push_back(path + " is empty");
    return out;
  }
  const char* names[] = {"gb_length", "mu", "h30", "h21", "nu"};
  std::array<std::optional<std::size_t>, 5> cols;
  bool any = false;
  for (std::size_t k = 0; k < 5; ++k) any |= (cols[k] = t.column(names[k])).has_value();
  if (!any) throw parse_error(path + ": no invariant columns (gb_length, mu, h30, h21, nu)");
  detail::ingest_rows(path, t, [&](const Weights& key, const std::vector<std::string>& f, std::size_t line) {
    PublishedRecord rec;
    rec.w = key;
    std::optional<long>* slots[] = {&rec.gb_length, &rec.mu, &rec.h30, &rec.h21, &rec.nu};
    for (std::size_t k = 0; k < 5; ++k) {
      if (!cols[k] || *cols[k] >= f.size() || f[*cols[k]].empty()) continue;
      long v;
      if (!detail::parse_long(f[*cols[k]], v))
        throw parse_error(path + ":" + std::to_string(line) + ": " + names[k] + " is not an integer");
      *slots[k] = v;
    }
    out.rows[key] = rec;
  });
  if (out.rows.empty()) out.warnings.push_back(path + " has no data rows");
  return out;
}

/// One row of records.csv as read back.
struct RecordRow {
  Weights w{};
  long d = 0;
  std::string status;
  std::optional<long> gb_length, mu, mu_plus, mu_zero, mu_minus, h30, h21, b3, nu;
};

inline std::vector<RecordRow> read_records_csv(const std::string& path) {
  auto t = read_csv(path, true);
  const char* names[] = {"gb_length", "mu", "mu_plus", "mu_zero", "mu_minus", "h30", "h21", "b3", "nu"};
  std::vector<RecordRow> out;
  auto status_col = t.column("status");
  auto d_col = t.column("d");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& f = t.rows[r];
    RecordRow row;
    for (std::size_t i = 0; i < num_vars; ++i) {
      auto c = t.column("w" + std::to_string(i + 1));
      long v;
      if (!c || *c >= f.size() || !detail::parse_long(f[*c], v))
        throw parse_error(path + ":" + std::to_string(t.line_numbers[r]) + ": missing weight");
      row.w[i] = v;
    }
    if (d_col && *d_col < f.size()) detail::parse_long(f[*d_col], row.d);
    if (status_col && *status_col < f.size()) row.status = f[*status_col];
    std::optional<long>* slots[] = {&row.gb_length, &row.mu,  &row.mu_plus, &row.mu_zero, &row.mu_minus,
                                    &row.h30,       &row.h21, &row.b3,      &row.nu};
    for (std::size_t k = 0; k < 9; ++k) {
      auto c = t.column(names[k]);
      long v;
      if (c && *c < f.size() && detail::parse_long(f[*c], v)) *slots[k] = v;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace cylink::pipeline
