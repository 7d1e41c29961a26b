#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mig/linalg.hpp"

namespace mig {

/// Shortest round-trip decimal representation of a double (std::to_chars),
/// so that emitted files are byte-stable across runs.
std::string format_double(double x);

/// Comma-separated values, '.' decimal point, LF line endings.
void write_csv(std::ostream& os, const Matrix& m,
               const std::vector<std::string>& header = {});
void write_csv_file(const std::string& path, const Matrix& m,
                    const std::vector<std::string>& header = {});

/// Reads a numeric CSV; a non-numeric first line is treated as a header
/// and skipped.
Matrix read_csv_file(const std::string& path);

/// Parses "a,b,c" into a vector; throws std::invalid_argument on garbage.
Vector parse_vector(const std::string& text);

}  // namespace mig
