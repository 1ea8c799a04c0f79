#pragma once

// Text files for complex matrices and vectors.
//
//   matrix: {"n": 2, "entries": [[[0,0],[1,0]], [[0,0],[0,0]]]}
//   vector: {"n": 2, "entries": [[1,0], [0,1]]}
//
// Every entry is a [re, im] pair.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"  // vendored nlohmann/json

#include "transrad/opcore.hpp"

namespace transrad::io {

namespace detail {

inline Complex parse_entry(const nlohmann::json& e, const std::string& where) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    throw Error(ErrorCode::ParseError, where + ": entry must be a [re, im] pair of numbers");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

inline long parse_n(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "document must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    throw Error(ErrorCode::ParseError, "field \"n\" must be an integer");
  }
  const long n = doc["n"].get<long>();
  if (n < 1) throw Error(ErrorCode::ParseError, "field \"n\" must be positive");
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw Error(ErrorCode::ParseError, "field \"entries\" must be an array");
  }
  if (static_cast<long>(doc["entries"].size()) != n) {
    throw Error(ErrorCode::ParseError, "\"entries\" must have n rows");
  }
  return n;
}

inline nlohmann::json parse_document(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline nlohmann::json entry_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace detail

inline Matrix parse_matrix(const std::string& text) {
  const nlohmann::json doc = detail::parse_document(text);
  const long n = detail::parse_n(doc);
  Matrix m(n, n);
  for (long i = 0; i < n; ++i) {
    const auto& row = doc["entries"][i];
    if (!row.is_array() || static_cast<long>(row.size()) != n) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(i) + " must have n entries");
    }
    for (long j = 0; j < n; ++j) {
      m(i, j) = detail::parse_entry(row[j], "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  return m;
}

inline Vector parse_vector(const std::string& text) {
  const nlohmann::json doc = detail::parse_document(text);
  const long n = detail::parse_n(doc);
  Vector v(n);
  for (long i = 0; i < n; ++i) v(i) = detail::parse_entry(doc["entries"][i], "entry " + std::to_string(i));
  return v;
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(detail::entry_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"n", m.rows()}, {"entries", std::move(rows)}};
}

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) entries.push_back(detail::entry_json(v(i)));
  return {{"n", v.size()}, {"entries", std::move(entries)}};
}

inline std::string format_matrix(const Matrix& m) { return matrix_to_json(m).dump(); }
inline std::string format_vector(const Vector& v) { return vector_to_json(v).dump(); }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Matrix read_matrix(const std::string& path) { return parse_matrix(read_text(path)); }
inline Vector read_vector(const std::string& path) { return parse_vector(read_text(path)); }

inline void write_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << format_matrix(m) << '\n';
}

}  // namespace transrad::io
