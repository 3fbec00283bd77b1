#include "mgcert/twogrid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mgcert/errors.hpp"
#include "mgcert/tolerances.hpp"

namespace mgcert {

namespace {

// Shared symmetric building blocks. w_comp = Mt (I - Pi) and w_range = Mt Pi
// are symmetric because Pi is self-adjoint in the Mt inner product; both are
// assembled directly from the coarse Gram matrix so no projector is ever
// applied twice.
struct Pieces {
  DenseMatrix w_comp;
  DenseMatrix w_range;
};

Pieces make_pieces(const SpdMatrix& mt, const Prolongation& p) {
  const DenseMatrix& pm = p.matrix();
  const DenseMatrix y = mt.matrix() * pm;
  const SpdMatrix gram(symmetrize(transpose(pm) * y));
  const DenseMatrix range = symmetrize(y * gram.solve(transpose(y)));
  return {symmetrize(mt.matrix() - range), range};
}

// (inv(A) - inv(Mt))^(1/2); positive semidefinite because one sweep plus its
// transpose contracts in the A norm.
DenseMatrix defect_sqrt(const SpdMatrix& a, const SpdMatrix& mt) {
  return spsd_sqrt(symmetrize(a.inverse() - mt.inverse()));
}

double k_tg_from_pieces(const SpdMatrix& a, const SpdMatrix& mt, const Pieces& pieces) {
  // Rayleigh route: the worst Mt-energy of the complement projection per unit
  // A-energy. A square prolongation zeroes the pencil; the floor at one keeps
  // the convergence identity 1 - 1/k intact there.
  const double pencil = std::max(1.0, gen_eig_extremes(pieces.w_comp, a).second);

  // Congruence route through the smoothing defect.
  const DenseMatrix gh = defect_sqrt(a, mt);
  const Spectrum s = sym_eig(gh * pieces.w_comp * gh);
  const double congruent = 1.0 + std::max(0.0, s.values.back());

  if (std::abs(pencil - congruent) > 1e-8 * std::max(1.0, pencil)) {
    fail(ErrorKind::CrossCheckFailed, "two k_tg routes disagree");
  }
  return pencil;
}

}  // namespace

TwoGridSetup::TwoGridSetup(Smoother smoother, Prolongation p, SpdMatrix bc)
    : smoother_(std::move(smoother)),
      p_(std::move(p)),
      ac_(galerkin(smoother_.a(), p_)),
      bc_(std::move(bc)) {
  if (p_.fine_order() != smoother_.a().order()) {
    fail(ErrorKind::BadDimension, "prolongation does not match the fine matrix");
  }
  if (bc_.order() != p_.coarse_order()) {
    fail(ErrorKind::BadDimension, "coarse surrogate does not match the coarse space");
  }
}

TwoGridSetup TwoGridSetup::exact(Smoother smoother, Prolongation p) {
  SpdMatrix bc = galerkin(smoother.a(), p);
  return TwoGridSetup(std::move(smoother), std::move(p), std::move(bc));
}

DenseMatrix correction_projection(const SpdMatrix& a, const Prolongation& p) {
  const DenseMatrix& pm = p.matrix();
  const SpdMatrix ac = galerkin(a, p);
  return pm * ac.solve(transpose(pm) * a.matrix());
}

DenseMatrix mtilde_projection(const SpdMatrix& mt, const Prolongation& p) {
  const DenseMatrix& pm = p.matrix();
  const DenseMatrix y = mt.matrix() * pm;
  const SpdMatrix gram(symmetrize(transpose(pm) * y));
  return pm * gram.solve(transpose(y));
}

double k_tg(const SpdMatrix& a, const SpdMatrix& mt, const Prolongation& p) {
  if (p.fine_order() != a.order() || mt.order() != a.order()) {
    fail(ErrorKind::BadDimension, "k_tg operands disagree on the fine order");
  }
  return k_tg_from_pieces(a, mt, make_pieces(mt, p));
}

ExactTwoGrid build_exact_twogrid(const TwoGridSetup& s) {
  const SpdMatrix& a = s.a();
  if (max_abs_diff(s.bc().matrix(), s.ac().matrix()) >
      1e-12 * std::max(1.0, max_abs(s.ac().matrix()))) {
    fail(ErrorKind::BadParameter, "exact two-grid needs the Galerkin coarse matrix");
  }
  const std::size_t n = a.order();
  const Smoother& sm = s.smoother();

  const DenseMatrix e =
      sm.post_error() * ((DenseMatrix::identity(n) - correction_projection(a, s.p())) * sm.pre_error());

  const Pieces pieces = make_pieces(sm.mtilde(), s.p());
  const SpdMatrix b(symmetrize(a.matrix() + transpose(sm.pre_error()) *
                                                (pieces.w_comp * sm.pre_error())));

  if (spectral_norm(e - (DenseMatrix::identity(n) - b.solve(a.matrix()))) > 1e-11) {
    fail(ErrorKind::CrossCheckFailed, "propagator and preconditioner forms disagree");
  }
  const auto [lo, hi] = gen_eig_extremes(a.matrix(), b);
  if (std::abs(hi - 1.0) > 1e-10) {
    fail(ErrorKind::CrossCheckFailed, "largest preconditioned eigenvalue is not one");
  }
  // Dominance is checked at the scale of A itself: for a square prolongation
  // the difference is pure roundoff and a tolerance relative to the tiny
  // difference would reject noise.
  const double dominance = sym_eig(b.matrix() - a.matrix()).values.front();
  if (dominance < -tol::kSpsd * std::max(1.0, frobenius_norm(a.matrix()))) {
    fail(ErrorKind::CrossCheckFailed, "preconditioner fails to dominate the matrix");
  }
  (void)lo;

  const double k = k_tg_from_pieces(a, sm.mtilde(), pieces);
  const double norm = operator_energy_norm(e, a);
  if (std::abs(norm - (1.0 - 1.0 / k)) > 1e-9) {
    fail(ErrorKind::CrossCheckFailed, "energy norm deviates from 1 - 1/k");
  }
  return {e, b.matrix(), norm, k};
}

InexactTwoGrid build_inexact_twogrid(const TwoGridSetup& s) {
  const SpdMatrix& a = s.a();
  const Smoother& sm = s.smoother();
  const DenseMatrix& pm = s.p().matrix();
  const std::size_t n = a.order();

  const DenseMatrix correction = pm * s.bc().solve(transpose(pm) * a.matrix());
  const DenseMatrix e = sm.post_error() * ((DenseMatrix::identity(n) - correction) * sm.pre_error());

  // Additive form of the inverse: one symmetrized sweep plus the smoothed
  // coarse solve.
  const DenseMatrix ep = sm.post_error() * pm;
  const DenseMatrix b_inv =
      symmetrize(sm.mbar().inverse() + ep * s.bc().solve(transpose(ep)));

  // Direct form of the preconditioner through the shifted coarse Gram matrix.
  const DenseMatrix& mt = sm.mtilde().matrix();
  const DenseMatrix y = mt * pm;
  const SpdMatrix shifted(
      symmetrize(transpose(pm) * y + s.bc().matrix() - s.ac().matrix()));
  const DenseMatrix mid = symmetrize(mt - y * shifted.solve(transpose(y)));
  const DenseMatrix b =
      symmetrize(a.matrix() + transpose(sm.pre_error()) * (mid * sm.pre_error()));

  if (spectral_norm(b * b_inv - DenseMatrix::identity(n)) > 1e-10) {
    fail(ErrorKind::CrossCheckFailed, "preconditioner forms are not mutual inverses");
  }
  if (spectral_norm(e - (DenseMatrix::identity(n) - b_inv * a.matrix())) > 1e-11) {
    fail(ErrorKind::CrossCheckFailed, "propagator and preconditioner forms disagree");
  }

  const double norm = operator_energy_norm(e, a);
  const auto [lo, hi] = gen_eig_extremes(b, a);
  const double from_spectrum = std::max(1.0 / lo - 1.0, 1.0 - 1.0 / hi);
  if (std::abs(norm - from_spectrum) > 1e-9) {
    fail(ErrorKind::CrossCheckFailed, "energy norm deviates from the eigenvalue formula");
  }
  return {e, b, b_inv, norm};
}

std::pair<double, double> deviation_extremes(const SpdMatrix& mt, const Prolongation& p,
                                             const SpdMatrix& bc, const SpdMatrix& ac) {
  if (mt.order() != p.fine_order() || bc.order() != p.coarse_order() ||
      ac.order() != p.coarse_order()) {
    fail(ErrorKind::BadDimension, "deviation operands disagree on the coarse order");
  }
  const DenseMatrix& pm = p.matrix();
  const SpdMatrix gram(symmetrize(transpose(pm) * (mt.matrix() * pm)));
  const auto [lo, hi] = gen_eig_extremes(bc.matrix() - ac.matrix(), gram);
  const double den1 = 1.0 + hi;
  const double den2 = 1.0 + lo;
  if (den1 <= 0.0 || den2 <= 0.0) {
    fail(ErrorKind::DegeneratePencil, "surrogate deviation pencil reaches -1");
  }
  return {1.0 / den1, 1.0 / den2};
}

std::pair<double, double> deviation_extremes(const TwoGridSetup& s) {
  return deviation_extremes(s.smoother().mtilde(), s.p(), s.bc(), s.ac());
}

ProjectionSplitExtremes projection_split_extremes(const SpdMatrix& a, const SpdMatrix& mt,
                                                  const Prolongation& p) {
  const Pieces pieces = make_pieces(mt, p);
  const DenseMatrix gh = defect_sqrt(a, mt);
  const Spectrum comp = sym_eig(gh * pieces.w_comp * gh);
  const Spectrum range = sym_eig(gh * pieces.w_range * gh);
  return {comp.values.front(), comp.values.back(), range.values.front(),
          range.values.back()};
}

SpectralQuantities spectral_quantities(const TwoGridSetup& s) {
  const SpdMatrix& a = s.a();
  const SpdMatrix& mt = s.smoother().mtilde();
  const Pieces pieces = make_pieces(mt, s.p());

  SpectralQuantities q{};
  q.k_tg = k_tg_from_pieces(a, mt, pieces);
  const auto [mt_lo, mt_hi] = gen_eig_extremes(mt.matrix(), a);
  q.lam_min_a_inv_mt = mt_lo;
  q.lam_max_a_inv_mt = mt_hi;
  q.lam_max_a_inv_mt_pi = gen_eig_extremes(pieces.w_range, a).second;
  const auto [d1, d2] = deviation_extremes(s);
  q.d1 = d1;
  q.d2 = d2;

  // Structural facts of the theory; failure means an eigensolver or assembly
  // defect, not a property of the input.
  if (q.lam_min_a_inv_mt < 1.0 - 1e-10) {
    fail(ErrorKind::CrossCheckFailed, "symmetrized smoother fails to dominate A");
  }
  if (q.lam_max_a_inv_mt_pi < 1.0 - 1e-10) {
    fail(ErrorKind::CrossCheckFailed, "projected smoother extreme fell below one");
  }
  if (q.k_tg < q.lam_max_a_inv_mt - q.lam_max_a_inv_mt_pi + 1.0 - 1e-9) {
    fail(ErrorKind::CrossCheckFailed, "k_tg violates the split lower bound");
  }
  if (q.d1 > q.d2 + 1e-12) {
    fail(ErrorKind::CrossCheckFailed, "deviation extremes are out of order");
  }
  return q;
}

double spectral_equivalence_upper_bound(const TwoGridSetup& s) {
  const double k = k_tg(s.a(), s.smoother().mtilde(), s.p());
  const auto [lo, hi] = gen_eig_extremes(s.ac().matrix(), s.bc());
  return std::max(1.0 - std::min(1.0, lo) / k, std::max(1.0, hi) - 1.0);
}

BoundsReport analyze_two_grid(const TwoGridSetup& s) {
  BoundsReport r;
  r.n = s.n();
  r.n_c = s.n_c();
  r.quantities = spectral_quantities(s);

  const double k = r.quantities.k_tg;
  const double lam_max = r.quantities.lam_max_a_inv_mt;
  const double lam_min = r.quantities.lam_min_a_inv_mt;
  const double lmp = r.quantities.lam_max_a_inv_mt_pi;
  const double d1 = r.quantities.d1;
  const double d2 = r.quantities.d2;

  const double l1 = 1.0 - 1.0 / std::max(k, lam_max - d2 * lmp + d2);
  const double u1 = 1.0 - 1.0 / (d1 * k + (1.0 - d1) * lam_max);

  if (d2 <= 1.0 + tol::kCase) {
    r.case_id = "i";
    r.lower = l1;
    r.upper = u1;
  } else {
    // Both remaining cases need the surrogate to stay clear of the ceiling
    // where the corrected step can stop converging.
    if (lmp > 1.0 && d2 >= lmp / (lmp - 1.0)) {
      fail(ErrorKind::OutOfTheoryRange, "surrogate deviation exceeds the admissible ceiling");
    }
    const double l2 = 1.0 - 1.0 / std::max(lam_min, d2 * k + (1.0 - d2) * lam_max);
    const double u2 = 1.0 / ((1.0 - d2) * lmp + d2) - 1.0;
    if (d1 <= 1.0 + tol::kCase) {
      r.case_id = "ii";
      r.lower = l2;
      r.upper = std::max(u1, u2);
    } else {
      r.case_id = "iii";
      const double l3 =
          1.0 / (std::min(lam_max - d1 * lmp, (1.0 - d1) * lam_min) + d1) - 1.0;
      r.lower = std::max(l2, l3);
      r.upper = std::max(1.0 - 1.0 / k, u2);
    }
  }

  r.actual = build_inexact_twogrid(s).energy_norm;
  r.notay_upper = spectral_equivalence_upper_bound(s);
  r.sandwich_ok = (r.lower - 1e-9 <= r.actual) && (r.actual <= r.upper + 1e-9);
  return r;
}

}  // namespace mgcert
