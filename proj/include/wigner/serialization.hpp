#pragma once

// Matrix container and map-spec files.
//
// A matrix file is JSON text with a header and row-major rows, one row per line;
// each complex entry is a two-element array [re, im] printed with 17 significant
// digits so doubles survive the round trip bit for bit:
//
//   {"format": "wigner-matrix", "version": 1, "n": 2, "cols": 2,
//    "data": [
//      [[1, 0], [0, 0]],
//      [[0, 0], [1, 0]]
//    ]}

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wigner/symmetry_map.hpp"

namespace wigner {

using Json = nlohmann::json;

inline constexpr int kMatrixFormatVersion = 1;
inline constexpr int kSpecFormatVersion = 1;

namespace detail {

inline std::string format_g17(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::IoFailure, "non-finite matrix entry");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_matrix_body(std::ostream& os, const Matrix& m, const std::string& indent) {
  os << "{\"format\": \"wigner-matrix\", \"version\": " << kMatrixFormatVersion << ", \"n\": " << m.rows()
     << ", \"cols\": " << m.cols() << ",\n"
     << indent << " \"data\": [";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "\n" : ",\n") << indent << "  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ", ";
      os << '[' << format_g17(m(i, j).real()) << ", " << format_g17(m(i, j).imag()) << ']';
    }
    os << ']';
  }
  os << (m.rows() > 0 ? "\n" + indent + " " : "") << "]}";
}

inline std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Names the data[row][col] element that contains byte offset `byte`, if any.
inline std::string element_at(const std::string& text, std::size_t byte) {
  const auto key = text.find("\"data\"");
  if (key == std::string::npos || key > byte) return "header";
  const auto open = text.find('[', key);
  if (open == std::string::npos || open > byte) return "data";
  int depth = 0;
  long row = -1, col = -1;
  for (std::size_t i = open; i < byte && i < text.size(); ++i) {
    const char c = text[i];
    if (c == '[') {
      ++depth;
      if (depth == 2) {
        ++row;
        col = -1;
      } else if (depth == 3) {
        ++col;
      }
    } else if (c == ']') {
      --depth;
    }
  }
  if (row < 0) return "data";
  if (col < 0) return "data[" + std::to_string(row) + "]";
  return "data[" + std::to_string(row) + "][" + std::to_string(col) + "]";
}

inline Matrix matrix_from_json(const Json& j, const std::string& where) {
  auto fail = [&](const std::string& what) { throw Error(ErrorCode::ParseFailure, where + ": " + what); };
  if (!j.is_object()) fail("matrix must be an object");
  if (j.value("format", "") != "wigner-matrix") fail("format tag is not wigner-matrix");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kMatrixFormatVersion) {
    fail("unsupported matrix format version");
  }
  if (!j.contains("n") || !j["n"].is_number_integer()) fail("missing integer n");
  const auto rows = j["n"].get<long>();
  const auto cols = j.contains("cols") && j["cols"].is_number_integer() ? j["cols"].get<long>() : rows;
  if (rows < 0 || cols < 0) fail("negative dimension");
  if (!j.contains("data") || !j["data"].is_array()) fail("missing data array");
  const Json& data = j["data"];
  if (static_cast<long>(data.size()) != rows) {
    throw Error(ErrorCode::DimensionMismatch, where + ": header n = " + std::to_string(rows) + " but " +
                                                  std::to_string(data.size()) + " rows");
  }
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    const Json& row = data[r];
    const std::string rname = where + " data[" + std::to_string(r) + "]";
    if (!row.is_array()) throw Error(ErrorCode::ParseFailure, rname + ": row is not an array");
    if (static_cast<long>(row.size()) != cols) {
      throw Error(ErrorCode::DimensionMismatch, rname + ": expected " + std::to_string(cols) + " entries, got " +
                                                    std::to_string(row.size()));
    }
    for (long c = 0; c < cols; ++c) {
      const Json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(ErrorCode::ParseFailure, rname + "[" + std::to_string(c) + "]: entry is not [re, im]");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline Json parse_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::ParseFailure, where + ":" + std::to_string(line) + ":" + std::to_string(col) + ": in " +
                                             element_at(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

}  // namespace detail

inline std::string matrix_to_text(const Matrix& m) {
  std::ostringstream os;
  detail::write_matrix_body(os, m, "");
  os << '\n';
  return os.str();
}

inline Matrix matrix_from_text(const std::string& text, const std::string& where = "<text>") {
  return detail::matrix_from_json(detail::parse_text(text, where), where);
}

inline void save_matrix(const std::string& path, const Matrix& m) { detail::write_file(path, matrix_to_text(m)); }

inline Matrix load_matrix(const std::string& path) { return matrix_from_text(detail::read_file(path), path); }

/// Loads and checks the dimension against `expected_n`.
inline Matrix load_matrix(const std::string& path, int expected_n) {
  Matrix m = load_matrix(path);
  if (m.rows() != expected_n || m.cols() != expected_n) {
    throw Error(ErrorCode::DimensionMismatch, path + ": expected " + std::to_string(expected_n) + "x" +
                                                  std::to_string(expected_n) + ", got " + std::to_string(m.rows()) +
                                                  "x" + std::to_string(m.cols()));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Map specs. Same container; matrices embed as matrix objects.

namespace detail {

inline void write_spec(std::ostream& os, const SymmetryMapSpec& spec, const std::string& indent) {
  const std::string in2 = indent + "  ";
  os << "{\"format\": \"wigner-spec\", \"version\": " << kSpecFormatVersion << ", \"kind\": \"" << spec.kind_name()
     << "\", \"n\": " << spec.source().n() << ", \"k\": " << spec.source().k()
     << ", \"target_n\": " << spec.target_ctx().n();
  auto field_matrix = [&](const char* name, const Matrix& m) {
    os << ",\n" << in2 << '"' << name << "\": ";
    write_matrix_body(os, m, in2);
  };
  auto field_spec = [&](const char* name, const SymmetryMapSpec& s) {
    os << ",\n" << in2 << '"' << name << "\": ";
    write_spec(os, s, in2);
  };
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kinds::Unitary> || std::is_same_v<K, kinds::AntiUnitary>) {
          field_matrix("U", k.u);
        } else if constexpr (std::is_same_v<K, kinds::JordanBlock>) {
          field_matrix("V1", k.v1);
          field_matrix("V2", k.v2);
        } else if constexpr (std::is_same_v<K, kinds::OracleTable>) {
          os << ", \"rank_factor\": " << k.rank_factor << ",\n" << in2 << "\"entries\": [";
          for (std::size_t i = 0; i < k.entries.size(); ++i) {
            os << (i == 0 ? "\n" : ",\n") << in2 << "  {\"input\": ";
            write_matrix_body(os, k.entries[i].input.matrix(), in2 + "  ");
            os << ",\n" << in2 << "   \"output\": ";
            write_matrix_body(os, k.entries[i].output.matrix(), in2 + "  ");
            os << '}';
          }
          os << "]";
        } else if constexpr (std::is_same_v<K, kinds::Perturbed>) {
          os << ", \"eps\": " << format_g17(k.eps);
          field_matrix("W", k.w);
          field_matrix("selector", k.selector);
          field_spec("base", *k.base);
        } else if constexpr (std::is_same_v<K, kinds::ComplementConjugated>) {
          field_spec("base", *k.base);
        }
      },
      spec.kind());
  os << '}';
}

inline SymmetryMapSpec spec_from_json(const Json& j, const std::string& where) {
  auto fail = [&](const std::string& what) { throw Error(ErrorCode::ParseFailure, where + ": " + what); };
  if (!j.is_object() || j.value("format", "") != "wigner-spec") fail("format tag is not wigner-spec");
  if (j.value("version", -1) != kSpecFormatVersion) fail("unsupported spec format version");
  for (const char* key : {"kind", "n", "k", "target_n"}) {
    if (!j.contains(key)) fail(std::string("missing ") + key);
  }
  const std::string kind = j["kind"].get<std::string>();
  const GrassmannIndex g(AlgebraContext(j["n"].get<int>()), j["k"].get<int>());
  const int target_n = j["target_n"].get<int>();
  auto mat = [&](const char* key) {
    if (!j.contains(key)) fail(std::string("missing ") + key);
    return matrix_from_json(j[key], where + "." + key);
  };
  if (kind == "unitary") return make_unitary_map(g, mat("U"));
  if (kind == "antiunitary") return make_antiunitary_map(g, mat("U"));
  if (kind == "jordan_block") return make_jordan_block_map(g, mat("V1"), mat("V2"));
  if (kind == "complement") return make_complement_map(g);
  if (kind == "complement_conjugated") {
    return make_complement_conjugated(std::make_shared<const SymmetryMapSpec>(spec_from_json(j["base"], where + ".base")));
  }
  if (kind == "perturbed") {
    auto base = std::make_shared<const SymmetryMapSpec>(spec_from_json(j["base"], where + ".base"));
    return SymmetryMapSpec(kinds::Perturbed{base, mat("W"), mat("selector"), j.value("eps", 0.0)}, g,
                           AlgebraContext(target_n));
  }
  if (kind == "oracle_table") {
    std::vector<std::pair<Projection, Projection>> pairs;
    const Json& entries = j.at("entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string w = where + ".entries[" + std::to_string(i) + "]";
      pairs.emplace_back(Projection::from_matrix(matrix_from_json(entries[i].at("input"), w + ".input")),
                         Projection::from_matrix(matrix_from_json(entries[i].at("output"), w + ".output")));
    }
    return SymmetryMapSpec(build_oracle_table(g.n(), std::move(pairs), j.value("rank_factor", 1)), g,
                           AlgebraContext(target_n));
  }
  throw Error(ErrorCode::ParseFailure, where + ": unknown kind '" + kind + "'");
}

}  // namespace detail

inline std::string spec_to_text(const SymmetryMapSpec& spec) {
  std::ostringstream os;
  detail::write_spec(os, spec, "");
  os << '\n';
  return os.str();
}

inline SymmetryMapSpec spec_from_text(const std::string& text, const std::string& where = "<text>") {
  const Json j = detail::parse_text(text, where);
  try {
    return detail::spec_from_json(j, where);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseFailure, where + ": " + e.what());
  }
}

inline void save_spec(const std::string& path, const SymmetryMapSpec& spec) {
  detail::write_file(path, spec_to_text(spec));
}

inline SymmetryMapSpec load_spec(const std::string& path) { return spec_from_text(detail::read_file(path), path); }

/// Matrix as nested [re, im] arrays, for embedding in reports.
inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return Json{{"format", "wigner-matrix"}, {"version", kMatrixFormatVersion}, {"n", m.rows()}, {"cols", m.cols()},
              {"data", std::move(rows)}};
}

}  // namespace wigner
