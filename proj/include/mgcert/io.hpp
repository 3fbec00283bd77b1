#pragma once

// Plain-text matrix exchange: a "rows cols" header line, then one matrix row
// per line with whitespace-separated decimals carrying 17 significant digits,
// enough to round-trip doubles exactly.

#include <string>

#include "mgcert/matrix.hpp"

namespace mgcert {

// Shortest %.17g rendering; reused by every serializer in the toolkit.
std::string format_double17(double x);

DenseMatrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const DenseMatrix& m);
std::string matrix_to_string(const DenseMatrix& m);

}  // namespace mgcert
