#include "mig/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mig {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Matrix& m,
               const std::vector<std::string>& header) {
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j) os << ',';
      os << header[j];
    }
    os << '\n';
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

void write_csv_file(const std::string& path, const Matrix& m,
                    const std::vector<std::string>& header) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(os, m, header);
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const char* s = cell.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s, &end);
    while (end && *end == ' ') ++end;
    if (end == s || (end && *end != '\0' && *end != '\r')) return false;
    out.push_back(v);
  }
  return !out.empty();
}

}  // namespace

Matrix read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    if (!parse_row(line, row)) {
      if (first) {
        first = false;
        continue;  // header line
      }
      throw std::runtime_error("malformed CSV line in " + path + ": " + line);
    }
    first = false;
    if (!rows.empty() && rows.front().size() != row.size())
      throw std::runtime_error("ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty CSV: " + path);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell == "inf" || cell == "+inf") {
      vals.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    if (cell == "-inf") {
      vals.push_back(-std::numeric_limits<double>::infinity());
      continue;
    }
    const char* s = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    while (end && *end == ' ') ++end;
    if (end == s || (end && *end != '\0'))
      throw std::invalid_argument("cannot parse number: '" + cell + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw std::invalid_argument("empty vector literal");
  Vector v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v(i) = vals[i];
  return v;
}

}  // namespace mig
