#pragma once

// Model problems, prolongations, Galerkin coarse operators, and the level
// stack consumed by the multigrid analysis. Level 0 is the coarsest; sizes
// increase strictly with the level index.

#include <cstddef>
#include <vector>

#include "mgcert/linalg.hpp"
#include "mgcert/matrix.hpp"
#include "mgcert/smoother.hpp"

namespace mgcert {

// Disjoint index sets partitioning {0..n-1} into fine and coarse points.
struct BlockPartition {
  std::vector<std::size_t> fine;
  std::vector<std::size_t> coarse;
};

// Throws BadParameter unless fine/coarse are disjoint, in range, and cover
// {0..n-1} together.
void validate_partition(const BlockPartition& part, std::size_t n);

// Full-column-rank interpolation matrix, n x n_c with n_c <= n. The rank gate
// compares the extreme singular values at a 1e-10 relative cutoff and throws
// NotSpd on failure, since every Galerkin product downstream would lose
// definiteness.
class Prolongation {
 public:
  explicit Prolongation(DenseMatrix p);

  const DenseMatrix& matrix() const { return p_; }
  std::size_t fine_order() const { return p_.rows(); }
  std::size_t coarse_order() const { return p_.cols(); }

 private:
  DenseMatrix p_;
};

SpdMatrix laplacian_1d(std::size_t n);              // tridiag(-1, 2, -1), n >= 2
SpdMatrix laplacian_2d(std::size_t nx, std::size_t ny);  // Kronecker sum, 5-point stencil

// n_fine = 2m+1; coarse points at odd 0-based fine positions; each column
// carries the stencil (1/2, 1, 1/2) onto the neighbors of its coarse point.
Prolongation linear_interpolation_1d(std::size_t n_fine);
// Tensor product of two 1D interpolations, matching laplacian_2d's ordering.
Prolongation bilinear_interpolation_2d(std::size_t nx, std::size_t ny);

// P = [-inv(A_ff) A_fc ; I] assembled back into the original index order.
Prolongation ideal_interpolation(const SpdMatrix& a, const BlockPartition& part);

// Pt A P, symmetrized and validated SPD.
SpdMatrix galerkin(const SpdMatrix& a, const Prolongation& p);

// Pt P = U_ct U_c (Cholesky), p_sharp = P inv(U_c), so p_sharp has orthonormal
// columns spanning range(P).
struct NormalizedProlongation {
  Prolongation p_sharp;
  DenseMatrix u_c;  // upper triangular
};
NormalizedProlongation normalize_prolongation(const Prolongation& p);

// Orthonormal n x (n - n_c) basis of the null space of Pt, so Pt S = 0 and
// [S P] is nonsingular.
DenseMatrix complement_basis(const Prolongation& p);

// Cosine of the abstract angle between the fine and coarse coordinate blocks
// in the A inner product; always in [0, 1) for SPD A.
double cbs_constant_block(const SpdMatrix& a, const BlockPartition& part);

// Same angle for the subspaces spanned by S and p_sharp in the W inner
// product.
double cbs_constant_general(const SpdMatrix& w, const DenseMatrix& s, const Prolongation& p_sharp);

// Two-by-two block model with identity diagonal blocks and an off-diagonal
// block whose largest singular value is exactly alpha, so the block angle
// constant equals alpha by construction. Deterministic for fixed arguments.
struct AlphaExample {
  SpdMatrix a;
  BlockPartition part;
};
AlphaExample alpha_parameterized_example(double alpha, std::size_t n_f, std::size_t n_c);

// Immutable level stack: matrices a(0..L) with a(k-1) the Galerkin product of
// a(k) through p(k), smoothers at 1..L, a surrogate coarsest operator
// a0_hat with a0_hat - a(0) SPSD, and the cycle index gamma.
class Hierarchy {
 public:
  Hierarchy(std::vector<SpdMatrix> a, std::vector<Prolongation> p, std::vector<Smoother> m,
            SpdMatrix a0_hat, int gamma);

  std::size_t levels() const { return a_.size() - 1; }  // L
  std::size_t order(std::size_t k) const { return a_[k].order(); }
  const SpdMatrix& a(std::size_t k) const { return a_.at(k); }
  const Prolongation& p(std::size_t k) const { return p_.at(k - 1); }      // k in 1..L
  const Smoother& smoother(std::size_t k) const { return m_.at(k - 1); }   // k in 1..L
  const SpdMatrix& a0_hat() const { return a0_hat_; }
  int gamma() const { return gamma_; }

  // Coarsest-solver surrogates keeping a0_hat - a(0) SPSD by construction.
  Hierarchy with_coarsest_shift(double theta) const;  // a0_hat = a(0) + theta (P1t Mt1 P1)
  Hierarchy with_coarsest_scale(double c) const;      // a0_hat = (1/c) a(0), c in (0, 1]
  Hierarchy with_gamma(int gamma) const;

 private:
  std::vector<SpdMatrix> a_;
  std::vector<Prolongation> p_;
  std::vector<Smoother> m_;
  SpdMatrix a0_hat_;
  int gamma_;
};

enum class SmootherKind { Jacobi, GaussSeidel };

// Geometric Poisson stacks with linear/bilinear interpolation. n (or nx, ny)
// must allow `levels` halvings: n_k = (n+1)/2^(L-k) - 1 >= 1. The coarsest
// solve starts exact (a0_hat = a(0)); use the with_* helpers to perturb it.
Hierarchy build_poisson_hierarchy_1d(std::size_t n_fine, std::size_t levels, SmootherKind kind,
                                     double omega, int gamma);
Hierarchy build_poisson_hierarchy_2d(std::size_t nx, std::size_t ny, std::size_t levels,
                                     SmootherKind kind, double omega, int gamma);

}  // namespace mgcert
