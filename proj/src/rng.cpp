#include "mgcert/rng.hpp"

#include <cmath>

#include "mgcert/errors.hpp"
#include "mgcert/linalg.hpp"

namespace mgcert {

DenseMatrix random_dense(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

DenseMatrix random_spd_matrix(Rng& rng, std::size_t n) {
  const DenseMatrix w = random_dense(rng, n, n, -1.0, 1.0);
  DenseMatrix a = symmetrize(w * transpose(w));
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.5;
  return a;
}

DenseMatrix random_orthogonal(Rng& rng, std::size_t n) {
  return householder_qr(random_dense(rng, n, n, -1.0, 1.0)).q;
}

DenseMatrix random_full_rank(Rng& rng, std::size_t n, std::size_t nc) {
  if (nc == 0 || nc > n) fail(ErrorKind::BadParameter, "random_full_rank: need 1 <= nc <= n");
  for (int attempt = 0; attempt < 100; ++attempt) {
    DenseMatrix p = random_dense(rng, n, nc, -1.0, 1.0);
    const Spectrum sp = sym_eig(symmetrize(transpose(p) * p));
    if (sp.values.front() > 1e-4 * sp.values.back()) return p;
  }
  fail(ErrorKind::BadParameter, "random_full_rank: could not reach the conditioning target");
}

}  // namespace mgcert
