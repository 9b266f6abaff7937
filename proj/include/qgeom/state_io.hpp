#pragma once

// JSON state files:
//   {"dims": [2,2] | [2], "re": [[...], ...], "im": [[...], ...]}
// Matrices are row-major. Values are written with 17 significant digits.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qgeom/states.hpp"

namespace qgeom {

namespace detail {
inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string matrix_part_json(const ComplexMatrix& m, bool imag) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += format_g17(imag ? m(i, j).imag() : m(i, j).real());
    }
    out += "]";
  }
  return out + "]";
}
}  // namespace detail

inline std::string matrix_to_json(const ComplexMatrix& m) {
  std::string dims = m.rows() == 4 ? "[2, 2]" : "[" + std::to_string(m.rows()) + "]";
  return "{\n  \"dims\": " + dims + ",\n  \"re\": " + detail::matrix_part_json(m, false) +
         ",\n  \"im\": " + detail::matrix_part_json(m, true) + "\n}\n";
}

inline std::string state_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix()); }

/// Parses the matrix part of a state file without density-matrix validation
/// (used for generator files as well).
inline ComplexMatrix matrix_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("state file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j.contains("re")) {
    throw ValidationError("state file: expected keys \"dims\" and \"re\"");
  }
  std::size_t n = 1;
  for (const auto& d : j.at("dims")) n *= d.get<std::size_t>();
  const auto& re = j.at("re");
  const nlohmann::json im = j.contains("im") ? j.at("im") : nlohmann::json();
  if (!re.is_array() || re.size() != n) {
    throw ValidationError("state file: \"re\" must have " + std::to_string(n) + " rows");
  }
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!re[r].is_array() || re[r].size() != n) {
      throw ValidationError("state file: row " + std::to_string(r) + " has wrong length");
    }
    for (std::size_t c = 0; c < n; ++c) {
      const double imag = im.is_null() ? 0.0 : im.at(r).at(c).get<double>();
      m(r, c) = cplx{re[r][c].get<double>(), imag};
    }
  }
  return m;
}

inline DensityMatrix state_from_json(const std::string& text,
                                     const Tolerances& tol = default_tolerances()) {
  return DensityMatrix::from_matrix(matrix_from_json(text), tol);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DensityMatrix load_state(const std::string& path,
                                const Tolerances& tol = default_tolerances()) {
  return state_from_json(read_text_file(path), tol);
}

inline void save_state(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << state_to_json(rho);
}

}  // namespace qgeom
