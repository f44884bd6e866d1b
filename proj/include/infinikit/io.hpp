#pragma once

// Text and JSON forms of matrices, prefixes, spectra and reports.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "infinikit/bridge.hpp"
#include "infinikit/dixmier.hpp"
#include "infinikit/error.hpp"
#include "infinikit/matrix.hpp"
#include "infinikit/rate_seq.hpp"

namespace infinikit::io {

using json = nlohmann::ordered_json;

/// 12 significant digits, with -0 printed as 0.
inline std::string format_real(double x) {
  if (x == 0.0) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// The value rounded to 12 significant digits, for JSON output.
inline double round_real(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_real(x));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_input, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view text) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::syntax, "not a number: '" + s + "'");
  }
  if (used != s.size()) fail(ErrorKind::syntax, "not a number: '" + s + "'");
  return v;
}

inline Matrix matrix_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("entries"))
    fail(ErrorKind::syntax, "matrix document needs an 'entries' field");
  const json& entries = doc["entries"];
  std::vector<double> flat;
  std::size_t rows = 0;
  if (!entries.is_array()) fail(ErrorKind::syntax, "'entries' must be an array");
  const bool nested = !entries.empty() && entries.front().is_array();
  if (nested) {
    rows = entries.size();
    for (const auto& row : entries) {
      if (!row.is_array() || row.size() != rows) fail(ErrorKind::dimension_mismatch, "matrix rows must be square");
      for (const auto& x : row) flat.push_back(x.get<double>());
    }
  } else {
    for (const auto& x : entries) flat.push_back(x.get<double>());
    rows = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
  }
  if (doc.contains("dim")) {
    const auto dim = doc["dim"].get<std::size_t>();
    if (dim != rows || dim * dim != flat.size())
      fail(ErrorKind::dimension_mismatch, "'dim' is " + std::to_string(dim) + " but entries give " +
                                               std::to_string(flat.size()) + " values");
  }
  if (rows * rows != flat.size()) fail(ErrorKind::dimension_mismatch, "entries do not form a square matrix");
  Matrix m(rows, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j) m(i, j) = flat[i * rows + j];
  return m;
}

}  // namespace detail

/// Rows of numbers separated by commas or whitespace, or {"dim", "entries"}.
/// Blank lines and lines starting with '#' are skipped.
inline Matrix parse_matrix(std::string_view text) {
  const std::string_view body = detail::trim(text);
  if (!body.empty() && body.front() == '{') {
    json doc;
    try {
      doc = json::parse(body);
    } catch (const json::exception& e) {
      fail(ErrorKind::syntax, std::string("matrix document: ") + e.what());
    }
    try {
      return detail::matrix_from_json(doc);
    } catch (const json::exception& e) {
      fail(ErrorKind::syntax, std::string("matrix document: ") + e.what());
    }
  }
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::string cleaned(t);
    for (char& c : cleaned)
      if (c == ',') c = ' ';
    std::istringstream fields(cleaned);
    std::vector<double> row;
    std::string item;
    while (fields >> item) row.push_back(detail::parse_real(item));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorKind::empty_input, "matrix file has no rows");
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      fail(ErrorKind::dimension_mismatch, "row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                                              " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline Matrix load_matrix(const std::string& path) { return parse_matrix(read_file(path)); }

inline std::string format_matrix(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? " " : "") + format_real(m(i, j));
    out += "\n";
  }
  return out;
}

inline json matrix_json(const Matrix& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(round_real(m(i, j)));
    entries.push_back(row);
  }
  return {{"dim", m.rows()}, {"entries", entries}};
}

/// "{1:0.5, 2:1/4}"; values are exact rationals.
inline hyperseq::RateSeq::Prefix parse_prefix(std::string_view text) {
  std::string_view body = detail::trim(text);
  if (body.size() < 2 || body.front() != '{' || body.back() != '}')
    fail(ErrorKind::syntax, "prefix must look like {1:0.5, 2:0.25}");
  body = body.substr(1, body.size() - 2);
  hyperseq::RateSeq::Prefix out;
  if (detail::trim(body).empty()) return out;
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t comma = std::min(body.find(',', start), body.size());
    const std::string_view item = detail::trim(body.substr(start, comma - start));
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) fail(ErrorKind::syntax, "prefix entry '" + std::string(item) + "' needs index:value");
    const std::string index(detail::trim(item.substr(0, colon)));
    if (index.empty() || index.find_first_not_of("0123456789") != std::string::npos)
      fail(ErrorKind::syntax, "prefix index '" + index + "' is not a positive integer");
    const auto n = std::stoull(index);
    if (n == 0) fail(ErrorKind::invalid_input, "sequence indices start at 1");
    out[n] = Scalar(parse_rational(detail::trim(item.substr(colon + 1))));
    start = comma + 1;
  }
  return out;
}

inline std::string format_spectrum(const opcalc::SpectralSequence& s) {
  std::string out;
  for (double v : s.values()) out += format_real(v) + "\n";
  if (s.has_tail()) out += "# tail: " + s.tail()->key() + "\n";
  return out;
}

inline json spectrum_json(const opcalc::SpectralSequence& s) {
  json values = json::array();
  for (double v : s.values()) values.push_back(round_real(v));
  json doc{{"values", values}};
  doc["tail"] = s.has_tail() ? json(s.tail()->key()) : json(nullptr);
  return doc;
}

inline json dixmier_json(const dixmier::DixmierEstimate& e) {
  json schedule = json::array();
  json gammas = json::array();
  json extrapolated = json::array();
  for (std::size_t j = 0; j < e.schedule.size(); ++j) {
    schedule.push_back(e.schedule[j]);
    gammas.push_back(round_real(e.gamma_values[j]));
    if (j >= e.window_start) extrapolated.push_back(round_real(e.extrapolated[j]));
  }
  json doc{{"schedule", schedule},
           {"gamma_values", gammas},
           {"window_start", e.schedule[e.window_start]},
           {"extrapolated", extrapolated},
           {"liminf", round_real(e.liminf)},
           {"limsup", round_real(e.limsup)},
           {"spread", round_real(e.spread)},
           {"measurable", e.measurable}};
  doc["value"] = e.value ? json(round_real(*e.value)) : json(nullptr);
  doc["measurability"] = "proxy: spread of the smoothed extrapolated gamma_N over the window";
  return doc;
}

inline json bridge_json(const bridge::BridgeReport& r) {
  json queries = json::array();
  for (const auto& q : r.queries)
    queries.push_back({{"predicate", q.predicate}, {"verdict", std::string(hyperseq::to_string(q.verdict))}});
  json stages = json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"stage", s.name}, {"canonical", s.canonical}, {"value", s.value}});
  json skipped = json::array();
  for (auto n : r.skipped) skipped.push_back(n);
  return {{"spectral", spectrum_json(r.spectral)},
          {"robinson", r.robinson.str()},
          {"H", r.H.str()},
          {"H_int", r.H_int.str()},
          {"skipped", skipped},
          {"queries", queries},
          {"enclosure",
           {{"lower", to_string(r.enclosure.lower)},
            {"upper", to_string(r.enclosure.upper)},
            {"decided_bits", r.enclosure.decided_bits}}},
          {"exhibitability_note", r.exhibitability_note},
          {"stages", stages}};
}

}  // namespace infinikit::io
