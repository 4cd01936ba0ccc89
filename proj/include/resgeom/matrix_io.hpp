#pragma once

// Text formats shared by the command-line tool.
//
// TSV:  first line is the tab-separated column labels, then one line per
//       row; numbers printed with 12 significant digits.
// JSON: {"labels": [...], "rows": [[...], ...]}; numbers printed with 17
//       significant digits.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "resgeom/errors.hpp"
#include "resgeom/linalg.hpp"

namespace resgeom::io {

enum class Format { tsv, json };

inline std::string format_number(double x, Format f) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f == Format::json ? "%.17g" : "%.12g", x);
  return buf;
}

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string json_labels(const std::vector<std::string>& labels) {
  std::string out = "[";
  for (std::size_t k = 0; k < labels.size(); ++k) out += (k ? ", " : "") + json_string(labels[k]);
  return out + "]";
}

inline std::string json_vector(const Vector& v) {
  std::string out = "[";
  for (Index k = 0; k < v.size(); ++k) out += (k ? ", " : "") + format_number(v(k), Format::json);
  return out + "]";
}

inline void write_matrix(std::ostream& out, const std::vector<std::string>& labels, const Matrix& m, Format f) {
  if (f == Format::tsv) {
    for (std::size_t k = 0; k < labels.size(); ++k) out << (k ? "\t" : "") << labels[k];
    out << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) out << (j ? "\t" : "") << format_number(m(i, j), f);
      out << '\n';
    }
    return;
  }
  out << "{\"labels\": " << json_labels(labels) << ", \"rows\": [";
  for (Index i = 0; i < m.rows(); ++i) {
    out << (i ? ", " : "") << json_vector(m.row(i).transpose());
  }
  out << "]}\n";
}

struct LabeledMatrix {
  std::vector<std::string> labels;
  Matrix matrix;
};

/// Reads the TSV layout written by write_matrix for a square matrix. Blank
/// lines and lines starting with '#' are skipped.
inline LabeledMatrix read_matrix_tsv(std::istream& in) {
  LabeledMatrix out;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (!have_header) {
      out.labels = tokens;
      have_header = true;
      continue;
    }
    if (tokens.size() != out.labels.size()) {
      throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(out.labels.size()) + " entries");
    }
    std::vector<double> row;
    for (const auto& tok : tokens) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": '" + tok + "' is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorCode::SyntaxError, "empty matrix document");
  const auto n = static_cast<Index>(out.labels.size());
  if (static_cast<Index>(rows.size()) != n) {
    throw Error(ErrorCode::NonSquare, std::to_string(rows.size()) + " rows for " + std::to_string(n) + " labels");
  }
  out.matrix.resize(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out.matrix(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  require_finite(out.matrix, "matrix");
  return out;
}

}  // namespace resgeom::io
