#pragma once

// Symmetric eigensolver, factorizations, and the matrix functions the
// convergence analysis is built on. All eigenwork funnels through one cyclic
// Jacobi routine so every spectral quantity in the toolkit is reproducible.

#include <cstddef>
#include <utility>
#include <vector>

#include "mgcert/matrix.hpp"

namespace mgcert {

struct CholeskyFactor {
  DenseMatrix lower;  // A = L Lt
};

struct LuFactor {
  DenseMatrix lu;                 // packed unit-lower L and upper U
  std::vector<std::size_t> perm;  // row permutation applied to the input
};

// Symmetric positive definite matrix, validated on construction. The stored
// matrix is the explicit symmetrization of the input; the Cholesky factor is
// kept because nearly every downstream operation needs it.
class SpdMatrix {
 public:
  explicit SpdMatrix(DenseMatrix m);

  const DenseMatrix& matrix() const { return m_; }
  std::size_t order() const { return m_.rows(); }
  const CholeskyFactor& chol() const { return chol_; }

  std::vector<double> solve(const std::vector<double>& rhs) const;
  DenseMatrix solve(const DenseMatrix& rhs) const;
  DenseMatrix inverse() const;

 private:
  DenseMatrix m_;
  CholeskyFactor chol_;
};

struct Spectrum {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column k pairs with values[k]
};

// Cyclic Jacobi rotations on the explicit symmetrization of s. Stops when the
// off-diagonal Frobenius mass falls below kJacobiOff times the input Frobenius
// norm; throws NoConvergence after kJacobiSweepCap sweeps.
Spectrum sym_eig(const DenseMatrix& s);

// Treats the input as symmetric and reads the lower triangle. Callers are
// responsible for the symmetry gate; SpdMatrix wires both together.
CholeskyFactor cholesky(const DenseMatrix& s);
std::vector<double> chol_solve(const CholeskyFactor& f, const std::vector<double>& rhs);
DenseMatrix chol_solve(const CholeskyFactor& f, const DenseMatrix& rhs);

LuFactor lu_factor(const DenseMatrix& m);
std::vector<double> lu_solve(const LuFactor& f, const std::vector<double>& rhs);
DenseMatrix lu_solve(const LuFactor& f, const DenseMatrix& rhs);
DenseMatrix inverse(const DenseMatrix& m);

// Extreme eigenvalues of the pencil A v = lambda B v, i.e. of inv(B) A. The
// pencil is reduced with the Cholesky factor of B; B is never inverted.
std::pair<double, double> gen_eig_extremes(const DenseMatrix& a, const SpdMatrix& b);

// lambda_min(S) >= -kSpsd * ||S||_2 with both extremes from sym_eig.
bool is_spsd(const DenseMatrix& s);

SpdMatrix spd_sqrt(const SpdMatrix& s);
// Square root of a positive semidefinite matrix; eigenvalues inside the kSpsd
// band below zero are clamped to zero.
DenseMatrix spsd_sqrt(const DenseMatrix& s);

double spectral_norm(const DenseMatrix& x);

// ||E||_A as the spectral radius of R E inv(R) with R = spd_sqrt(A). Throws
// SimilarityNotSymmetric when that similarity fails the symmetry gate, which
// is the signature of an operator that is not self-adjoint in the A inner
// product.
double operator_energy_norm(const DenseMatrix& e, const SpdMatrix& a);

// Full Householder QR, q: n x n orthogonal, r: n x m upper trapezoidal.
struct QrFactor {
  DenseMatrix q;
  DenseMatrix r;
};
QrFactor householder_qr(const DenseMatrix& a);

}  // namespace mgcert
