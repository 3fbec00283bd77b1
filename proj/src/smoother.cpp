#include "mgcert/smoother.hpp"

#include <utility>

#include "mgcert/errors.hpp"

namespace mgcert {

namespace {

// Cholesky factor of N = M + Mt - A, the matrix whose definiteness decides
// A-convergence of the sweep.
CholeskyFactor convergence_factor(const SpdMatrix& a, const DenseMatrix& m) {
  const DenseMatrix n = m + transpose(m) - a.matrix();
  try {
    return cholesky(n);
  } catch (const Error&) {
    fail(ErrorKind::NotAConvergent, "M + Mt - A is not SPD, the sweep does not contract in the A norm");
  }
}

SpdMatrix make_mbar(const SpdMatrix& a, const DenseMatrix& m) {
  const CholeskyFactor f = convergence_factor(a, m);
  return SpdMatrix(symmetrize(m * chol_solve(f, transpose(m))));
}

SpdMatrix make_mtilde(const SpdMatrix& a, const DenseMatrix& m) {
  const CholeskyFactor f = convergence_factor(a, m);
  return SpdMatrix(symmetrize(transpose(m) * chol_solve(f, m)));
}

}  // namespace

Smoother::Smoother(SpdMatrix a, DenseMatrix m)
    : a_(std::move(a)),
      m_(std::move(m)),
      m_inv_(inverse(m_)),
      mbar_(make_mbar(a_, m_)),
      mtilde_(make_mtilde(a_, m_)),
      pre_error_(DenseMatrix::identity(a_.order()) - m_inv_ * a_.matrix()),
      post_error_(DenseMatrix::identity(a_.order()) - transpose(m_inv_) * a_.matrix()) {}

Smoother Smoother::weighted_jacobi(const SpdMatrix& a, double omega) {
  if (!(omega > 0.0)) fail(ErrorKind::BadParameter, "Jacobi weight must be positive");
  const std::size_t n = a.order();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = a.matrix()(i, i) / omega;
  return Smoother(a, std::move(m));
}

Smoother Smoother::gauss_seidel(const SpdMatrix& a) {
  const std::size_t n = a.order();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = a.matrix()(i, j);
  return Smoother(a, std::move(m));
}

Smoother Smoother::from_matrix(const SpdMatrix& a, const DenseMatrix& m) {
  require_square(m, "M");
  if (m.rows() != a.order()) fail(ErrorKind::BadDimension, "M and A orders differ");
  require_finite(m, "M");
  return Smoother(a, m);
}

bool check_a_convergent(const DenseMatrix& m, const SpdMatrix& a) {
  require_square(m, "M");
  if (m.rows() != a.order()) fail(ErrorKind::BadDimension, "M and A orders differ");
  (void)lu_factor(m);  // Singular when M has no inverse
  try {
    (void)cholesky(m + transpose(m) - a.matrix());
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::pair<double, double> smoother_relations_residual(const Smoother& s) {
  const DenseMatrix eye = DenseMatrix::identity(s.a().order());
  const DenseMatrix r1 = (eye - s.mbar().solve(s.a().matrix())) - s.post_error() * s.pre_error();
  const DenseMatrix r2 = (eye - s.mtilde().solve(s.a().matrix())) - s.pre_error() * s.post_error();
  return {spectral_norm(r1), spectral_norm(r2)};
}

}  // namespace mgcert
