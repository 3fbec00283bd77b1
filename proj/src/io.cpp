#include "mgcert/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mgcert/errors.hpp"

namespace mgcert {

std::string format_double17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

DenseMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open matrix file: " + path);
  long long rows = 0;
  long long cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0)
    fail(ErrorKind::Io, "bad matrix header in " + path);
  DenseMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double v = 0.0;
      if (!(in >> v)) fail(ErrorKind::Io, "matrix file ends early: " + path);
      if (!std::isfinite(v)) fail(ErrorKind::Io, "nonfinite entry in " + path);
      m(i, j) = v;
    }
  double trailing = 0.0;
  if (in >> trailing) fail(ErrorKind::Io, "trailing data in " + path);
  return m;
}

std::string matrix_to_string(const DenseMatrix& m) {
  std::ostringstream out;
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double17(m(i, j));
    }
    out << '\n';
  }
  return out.str();
}

void write_matrix(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write matrix file: " + path);
  out << matrix_to_string(m);
  if (!out) fail(ErrorKind::Io, "short write to " + path);
}

}  // namespace mgcert
