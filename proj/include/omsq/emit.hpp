#pragma once

// Byte-stable serialization of sweep results: long-format CSV (one row per
// cell) or JSON (metadata plus columnar arrays). Floats are written with 17
// significant digits through std::to_chars, independent of locale.

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <cstring>

#include "omsq/errors.hpp"
#include "omsq/report.hpp"
#include "omsq/spectrum.hpp"
#include "omsq/sweep.hpp"

namespace omsq {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::optional<double> decibels_or_empty(std::optional<double> s) {
  if (!s || !(*s > 0.0)) return std::nullopt;
  return to_decibels(*s);
}

inline void write_csv(std::ostream& os, const SweepResult& r) {
  const bool two_d = r.spec.axis2.has_value();
  os << (two_d ? "axis1,axis2,S,S_dB,stable\n" : "axis1,S,S_dB,stable\n");
  for (const SweepRow& row : r.rows) {
    os << format_double(row.axis1) << ',';
    if (two_d) os << format_double(*row.axis2) << ',';
    if (row.s) os << format_double(*row.s);
    os << ',';
    if (const auto db = decibels_or_empty(row.s)) os << format_double(*db);
    os << ',' << (row.stable ? "true" : "false") << '\n';
  }
}

inline json sweep_to_json(const SweepResult& r) {
  json j;
  j["metadata"] = r.metadata;
  json a1 = json::array(), a2 = json::array(), s = json::array(), db = json::array(), st = json::array();
  for (const SweepRow& row : r.rows) {
    a1.push_back(row.axis1);
    if (row.axis2) a2.push_back(*row.axis2);
    s.push_back(row.s ? json(*row.s) : json(nullptr));
    const auto d = decibels_or_empty(row.s);
    db.push_back(d ? json(*d) : json(nullptr));
    st.push_back(row.stable);
  }
  j["axis1"] = a1;
  if (r.spec.axis2) j["axis2"] = a2;
  j["S"] = s;
  j["S_dB"] = db;
  j["stable"] = st;
  return j;
}

/// JSON floats use the shortest round-trip form, which is deterministic.
inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

inline void write_json(std::ostream& os, const SweepResult& r) { os << dump_json(sweep_to_json(r)); }

inline std::string render(const SweepResult& r, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::csv) {
    write_csv(os, r);
  } else {
    write_json(os, r);
  }
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "': " + std::strerror(errno));
}

/// Path of the metadata sidecar written next to a CSV file.
inline std::string sidecar_path(const std::string& csv_path) { return csv_path + ".meta.json"; }

/// Writes `r` to `path`. CSV output gets a `<path>.meta.json` sidecar holding
/// the metadata block.
inline void emit(const SweepResult& r, OutputFormat format, const std::string& path) {
  write_file(path, render(r, format));
  if (format == OutputFormat::csv) write_file(sidecar_path(path), dump_json(r.metadata));
}

}  // namespace omsq
