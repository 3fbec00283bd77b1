#include <cmath>
#include <vector>

#include "doctest.h"
#include "mgcert/errors.hpp"
#include "mgcert/linalg.hpp"
#include "mgcert/matrix.hpp"
#include "mgcert/rng.hpp"
#include "mgcert/tolerances.hpp"
#include "oracles.hpp"

using namespace mgcert;

namespace {

DenseMatrix second_difference(std::size_t n) {
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 2.0;
    if (i + 1 < n) {
      a(i, i + 1) = -1.0;
      a(i + 1, i) = -1.0;
    }
  }
  return a;
}

DenseMatrix random_symmetric(Rng& rng, std::size_t n) {
  return symmetrize(random_dense(rng, n, n, -1.0, 1.0));
}

}  // namespace

TEST_CASE("sym_eig reproduces the closed-form path-graph spectrum") {
  const DenseMatrix a = second_difference(4);
  const Spectrum sp = sym_eig(a);
  REQUIRE(sp.values.size() == 4);

  // Frozen values computed from 2 - 2 cos(k pi / 5); equal to (3 -+ sqrt 5)/2
  // and (5 -+ sqrt 5)/2.
  const double expected[4] = {0.38196601125010515, 1.3819660112501052, 2.6180339887498949,
                              3.6180339887498949};
  for (int k = 0; k < 4; ++k) {
    CHECK(sp.values[k] == doctest::Approx(expected[k]).epsilon(1e-13));
    CHECK(sp.values[k] ==
          doctest::Approx(oracles::path_laplacian_eigenvalue(4, k + 1)).epsilon(1e-13));
    // Independent check: each value annihilates the characteristic polynomial.
    CHECK(std::abs(oracles::char_poly(a, sp.values[k])) < 1e-12);
  }

  // The smallest eigenvalue again, this time from bisection on the
  // characteristic polynomial with no eigensolver involved.
  const double bisected = oracles::char_poly_root(a, 0.1, 0.5);
  CHECK(sp.values[0] == doctest::Approx(bisected).epsilon(1e-12));
}

TEST_CASE("sym_eig handles diagonal input and sorts ascending") {
  DenseMatrix d(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const Spectrum sp = sym_eig(d);
  CHECK(sp.values[0] == doctest::Approx(1.0));
  CHECK(sp.values[1] == doctest::Approx(2.0));
  CHECK(sp.values[2] == doctest::Approx(3.0));
  // Eigenvector for the smallest value is e_1 up to sign.
  CHECK(std::abs(sp.vectors(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig reconstruction and orthonormality on random symmetric input") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const DenseMatrix s = random_symmetric(rng, n);
    const Spectrum sp = sym_eig(s);

    DenseMatrix lam(n, n);
    for (std::size_t i = 0; i < n; ++i) lam(i, i) = sp.values[i];
    const DenseMatrix rebuilt = sp.vectors * lam * transpose(sp.vectors);
    const double snorm = std::abs(sp.values.front()) > std::abs(sp.values.back())
                             ? std::abs(sp.values.front())
                             : std::abs(sp.values.back());
    CHECK(max_abs_diff(rebuilt, s) <= tol::kEig * std::max(snorm, 1e-30));

    const DenseMatrix vtv = transpose(sp.vectors) * sp.vectors;
    CHECK(max_abs_diff(vtv, DenseMatrix::identity(n)) < 1e-12);

    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(sp.values[i] <= sp.values[i + 1]);
  }
}

TEST_CASE("sym_eig rejects a matrix outside the symmetry gate") {
  DenseMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0 + 1e-6;
  m(1, 1) = 1.0;
  CHECK_THROWS_AS((void)sym_eig(m), Error);
  try {
    (void)sym_eig(m);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSymmetric);
  }
  // Asymmetry below the relative gate is accepted and symmetrized away.
  m(1, 0) = 1.0 + 1e-12;
  CHECK_NOTHROW((void)sym_eig(m));
}

TEST_CASE("cholesky recovers a hand-built factor and flags indefiniteness") {
  // L = [[2,0,0],[1,3,0],[0,1,1]] gives A = L Lt below.
  DenseMatrix a(3, 3);
  a(0, 0) = 4;
  a(0, 1) = 2;
  a(1, 0) = 2;
  a(1, 1) = 10;
  a(1, 2) = 3;
  a(2, 1) = 3;
  a(2, 2) = 2;
  const CholeskyFactor f = cholesky(a);
  CHECK(f.lower(0, 0) == doctest::Approx(2.0));
  CHECK(f.lower(1, 0) == doctest::Approx(1.0));
  CHECK(f.lower(1, 1) == doctest::Approx(3.0));
  CHECK(f.lower(2, 1) == doctest::Approx(1.0));
  CHECK(f.lower(2, 2) == doctest::Approx(1.0));
  CHECK(f.lower(0, 1) == 0.0);

  DenseMatrix indef(2, 2);
  indef(0, 0) = 1;
  indef(0, 1) = 2;
  indef(1, 0) = 2;
  indef(1, 1) = 1;
  CHECK_THROWS_AS((void)cholesky(indef), Error);
}

TEST_CASE("cholesky pivot gate is relative to the largest diagonal entry") {
  DenseMatrix nearly(2, 2);
  nearly(0, 0) = 1.0;
  nearly(1, 1) = 1e-13;  // below kSpd * max diagonal
  CHECK_THROWS_AS((void)cholesky(nearly), Error);
  nearly(1, 1) = 1e-11;  // above the gate
  CHECK_NOTHROW((void)cholesky(nearly));
}

TEST_CASE("SpdMatrix validates, symmetrizes, and solves") {
  Rng rng(7);
  const DenseMatrix raw = random_spd_matrix(rng, 6);
  const SpdMatrix a(raw);
  const std::vector<double> x = {1, -2, 3, 0.5, -0.25, 2};
  const std::vector<double> b = a.matrix() * x;
  const std::vector<double> solved = a.solve(b);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(solved[i] == doctest::Approx(x[i]).epsilon(1e-10));

  const DenseMatrix id = a.matrix() * a.inverse();
  CHECK(max_abs_diff(id, DenseMatrix::identity(6)) < 1e-10);

  DenseMatrix indef = DenseMatrix::identity(3);
  indef(2, 2) = -1.0;
  CHECK_THROWS_AS(SpdMatrix{indef}, Error);
}

TEST_CASE("lu_factor inverts a frozen 2x2 and rejects singular input") {
  DenseMatrix m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(1, 0) = 3;
  m(1, 1) = 4;
  const DenseMatrix inv = inverse(m);
  CHECK(inv(0, 0) == doctest::Approx(-2.0));
  CHECK(inv(0, 1) == doctest::Approx(1.0));
  CHECK(inv(1, 0) == doctest::Approx(1.5));
  CHECK(inv(1, 1) == doctest::Approx(-0.5));

  DenseMatrix rank1(2, 2);
  rank1(0, 0) = 1;
  rank1(0, 1) = 2;
  rank1(1, 0) = 2;
  rank1(1, 1) = 4;
  CHECK_THROWS_AS((void)lu_factor(rank1), Error);
  try {
    (void)lu_factor(rank1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Singular);
  }
}

TEST_CASE("gen_eig_extremes matches the 2x2 quadratic closed form") {
  DenseMatrix a(2, 2);
  a(0, 0) = 3;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 3;
  DenseMatrix bd(2, 2);
  bd(0, 0) = 1;
  bd(1, 1) = 4;
  const SpdMatrix b(bd);

  // inv(B) A has trace 3 + 3/4 and determinant det(A)/det(B) = 8/4.
  const double tr = 3.75, det = 2.0;
  const double disc = std::sqrt(tr * tr - 4.0 * det);
  const auto [lo, hi] = gen_eig_extremes(a, b);
  CHECK(lo == doctest::Approx(0.5 * (tr - disc)).epsilon(1e-13));
  CHECK(hi == doctest::Approx(0.5 * (tr + disc)).epsilon(1e-13));
}

TEST_CASE("gen_eig_extremes agrees with the congruence-by-inverse-sqrt oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const DenseMatrix a = random_symmetric(rng, n);
    const SpdMatrix b(random_spd_matrix(rng, n));

    const SpdMatrix rb = spd_sqrt(b);
    const DenseMatrix rinv = rb.inverse();
    const DenseMatrix c = symmetrize(rinv * a * rinv);
    const Spectrum sp = sym_eig(c);

    const auto [lo, hi] = gen_eig_extremes(a, b);
    CHECK(lo == doctest::Approx(sp.values.front()).epsilon(1e-10));
    CHECK(hi == doctest::Approx(sp.values.back()).epsilon(1e-10));
  }
}

TEST_CASE("is_spsd accepts the gate band and rejects beyond it") {
  DenseMatrix ones(2, 2);
  ones(0, 0) = ones(0, 1) = ones(1, 0) = ones(1, 1) = 1.0;
  CHECK(is_spsd(ones));  // rank deficient but semidefinite

  DenseMatrix border = DenseMatrix::identity(2);
  border(1, 1) = -0.5e-10;  // inside the kSpsd band relative to norm 1
  CHECK(is_spsd(border));
  border(1, 1) = -2e-10;  // outside
  CHECK(!is_spsd(border));

  CHECK(is_spsd(DenseMatrix(3, 3)));  // zero matrix
}

TEST_CASE("spd_sqrt squares back to the input") {
  DenseMatrix d(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const SpdMatrix s(d);
  const SpdMatrix r = spd_sqrt(s);
  CHECK(r.matrix()(0, 0) == doctest::Approx(2.0));
  CHECK(r.matrix()(1, 1) == doctest::Approx(3.0));
  CHECK(r.matrix()(0, 1) == doctest::Approx(0.0));

  Rng rng(5);
  const SpdMatrix a(random_spd_matrix(rng, 7));
  const SpdMatrix ra = spd_sqrt(a);
  CHECK(max_abs_diff(ra.matrix() * ra.matrix(), a.matrix()) < 1e-10 * max_abs(a.matrix()));
}

TEST_CASE("spsd_sqrt clamps the semidefinite band and rejects indefinite input") {
  DenseMatrix ones(2, 2);
  ones(0, 0) = ones(0, 1) = ones(1, 0) = ones(1, 1) = 1.0;
  const DenseMatrix r = spsd_sqrt(ones);
  CHECK(max_abs_diff(r * r, ones) < 1e-12);

  DenseMatrix indef = DenseMatrix::identity(2);
  indef(1, 1) = -1.0;
  CHECK_THROWS_AS((void)spsd_sqrt(indef), Error);
}

TEST_CASE("spectral_norm matches singular values of a frozen rectangle") {
  DenseMatrix m(2, 3);
  m(0, 0) = 3.0;
  m(1, 2) = 4.0;
  CHECK(spectral_norm(m) == doctest::Approx(4.0));
  CHECK(spectral_norm(DenseMatrix(2, 2)) == doctest::Approx(0.0));
}

TEST_CASE("operator_energy_norm on a frozen similarity-symmetric operator") {
  DenseMatrix ad(2, 2);
  ad(0, 0) = 1.0;
  ad(1, 1) = 4.0;
  const SpdMatrix a(ad);

  DenseMatrix e(2, 2);
  e(0, 0) = 0.5;
  e(0, 1) = 0.3;
  e(1, 0) = 0.075;  // makes diag(1,2) E diag(1,1/2) symmetric with off-diagonal 0.15
  e(1, 1) = 0.5;
  CHECK(operator_energy_norm(e, a) == doctest::Approx(0.65).epsilon(1e-13));

  e(1, 0) = 0.0;  // similarity no longer symmetric
  CHECK_THROWS_AS((void)operator_energy_norm(e, a), Error);
  try {
    (void)operator_energy_norm(e, a);
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::SimilarityNotSymmetric);
  }
}

TEST_CASE("operator_energy_norm dominates sampled energy Rayleigh ratios") {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 4 + trial;
    const SpdMatrix a(random_spd_matrix(rng, n));
    // Build an operator that is self-adjoint in the A inner product.
    const SpdMatrix r = spd_sqrt(a);
    const DenseMatrix rinv = r.inverse();
    const DenseMatrix sym = random_symmetric(rng, n);
    const DenseMatrix e = rinv * sym * r.matrix();

    const double norm = operator_energy_norm(e, a);
    double best = 0.0;
    for (int s = 0; s < 200; ++s) {
      std::vector<double> v(n);
      for (auto& vi : v) vi = rng.uniform(-1.0, 1.0);
      const double ratio = oracles::energy_ratio(e, a.matrix(), v);
      CHECK(ratio <= norm + 1e-9);
      best = std::max(best, ratio);
    }
    CHECK(best > 0.2 * norm);  // sampling really probes the operator

    // The maximizing direction itself: top eigenvector of the similarity,
    // mapped back. The ratio then attains the norm.
    const DenseMatrix t = symmetrize(r.matrix() * e * rinv);
    const Spectrum sp = sym_eig(t);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < sp.values.size(); ++i)
      if (std::abs(sp.values[i]) > std::abs(sp.values[arg])) arg = i;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = sp.vectors(i, arg);
    const std::vector<double> v = rinv * w;
    CHECK(oracles::energy_ratio(e, a.matrix(), v) == doctest::Approx(norm).epsilon(1e-9));
  }
}

TEST_CASE("householder_qr produces an orthogonal factor and upper triangle") {
  Rng rng(17);
  const DenseMatrix p = random_dense(rng, 6, 3, -1.0, 1.0);
  const QrFactor f = householder_qr(p);
  CHECK(max_abs_diff(transpose(f.q) * f.q, DenseMatrix::identity(6)) < 1e-12);
  CHECK(max_abs_diff(f.q * f.r, p) < 1e-12);
  for (std::size_t i = 0; i < f.r.rows(); ++i)
    for (std::size_t j = 0; j < f.r.cols() && j < i; ++j) CHECK(f.r(i, j) == 0.0);
}
