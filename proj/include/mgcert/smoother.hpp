#pragma once

// Stationary smoothers with their symmetrized companions. A sweep u <- u +
// inv(M)(f - A u) converges in the A norm exactly when M + Mt - A is SPD;
// construction enforces that, so holding a Smoother is proof of convergence.

#include <utility>

#include "mgcert/linalg.hpp"
#include "mgcert/matrix.hpp"

namespace mgcert {

class Smoother {
 public:
  // M = (1/omega) diag(A). Requires (2/omega) diag(A) - A SPD.
  static Smoother weighted_jacobi(const SpdMatrix& a, double omega);
  // M = lower triangle of A including the diagonal (forward sweep).
  static Smoother gauss_seidel(const SpdMatrix& a);
  // Caller-supplied M, still subject to the A-convergence gate.
  static Smoother from_matrix(const SpdMatrix& a, const DenseMatrix& m);

  const SpdMatrix& a() const { return a_; }
  const DenseMatrix& m() const { return m_; }
  const DenseMatrix& m_inv() const { return m_inv_; }

  // M (M + Mt - A)^-1 Mt: symmetrized smoother of the sweep followed by the
  // transposed sweep.
  const SpdMatrix& mbar() const { return mbar_; }
  // Mt (M + Mt - A)^-1 M: transposed sweep followed by the sweep.
  const SpdMatrix& mtilde() const { return mtilde_; }

  // I - inv(M) A and I - inv(Mt) A, the error propagators of one sweep and of
  // the transposed sweep.
  const DenseMatrix& pre_error() const { return pre_error_; }
  const DenseMatrix& post_error() const { return post_error_; }

 private:
  Smoother(SpdMatrix a, DenseMatrix m);

  SpdMatrix a_;
  DenseMatrix m_;
  DenseMatrix m_inv_;
  SpdMatrix mbar_;
  SpdMatrix mtilde_;
  DenseMatrix pre_error_;
  DenseMatrix post_error_;
};

// True when M + Mt - A is SPD. Throws Singular when M is not invertible.
bool check_a_convergent(const DenseMatrix& m, const SpdMatrix& a);

// Spectral norms of the two symmetrization identities:
//   (I - inv(Mbar) A)   vs (I - inv(Mt) A)(I - inv(M) A)
//   (I - inv(Mtilde) A) vs (I - inv(M) A)(I - inv(Mt) A)
std::pair<double, double> smoother_relations_residual(const Smoother& s);

}  // namespace mgcert
