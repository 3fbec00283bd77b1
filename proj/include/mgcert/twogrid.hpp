#pragma once

// Exact and inexact two-grid operators as explicit dense matrices, the
// spectral quantities governing their convergence, and two-sided bounds on
// the energy-norm convergence factor. Every derived operator carries built-in
// cross-checks between independent formulas; disagreement throws
// CrossCheckFailed rather than returning a silently wrong number.

#include <cstddef>
#include <string>
#include <utility>

#include "mgcert/hierarchy.hpp"
#include "mgcert/linalg.hpp"
#include "mgcert/smoother.hpp"

namespace mgcert {

// One two-grid instance: fine matrix (held by the smoother), prolongation,
// and the SPD coarse surrogate B_c replacing the Galerkin matrix A_c.
class TwoGridSetup {
 public:
  TwoGridSetup(Smoother smoother, Prolongation p, SpdMatrix bc);
  // B_c = A_c, the exact coarse solve.
  static TwoGridSetup exact(Smoother smoother, Prolongation p);

  const SpdMatrix& a() const { return smoother_.a(); }
  const Smoother& smoother() const { return smoother_; }
  const Prolongation& p() const { return p_; }
  const SpdMatrix& ac() const { return ac_; }
  const SpdMatrix& bc() const { return bc_; }
  std::size_t n() const { return a().order(); }
  std::size_t n_c() const { return p_.coarse_order(); }

 private:
  Smoother smoother_;
  Prolongation p_;
  SpdMatrix ac_;
  SpdMatrix bc_;
};

// P inv(Pt A P) Pt A: projection onto range(P), orthogonal in the A inner
// product.
DenseMatrix correction_projection(const SpdMatrix& a, const Prolongation& p);

// P inv(Pt Mt P) Pt Mt: projection onto range(P), orthogonal in the Mt inner
// product.
DenseMatrix mtilde_projection(const SpdMatrix& mt, const Prolongation& p);

// Convergence quantity of the exact method: the energy norm of its error
// propagator is 1 - 1/k_tg. Computed two independent ways (a Rayleigh pencil
// and a congruence with sqrt(inv(A) - inv(Mt))) and cross-checked to 1e-8.
double k_tg(const SpdMatrix& a, const SpdMatrix& mt, const Prolongation& p);

struct ExactTwoGrid {
  DenseMatrix e;       // error propagator of one exact two-grid step
  DenseMatrix b;       // induced SPD preconditioner, e = I - inv(b) a
  double energy_norm;  // |e|_A, equal to 1 - 1/k
  double k;
};
ExactTwoGrid build_exact_twogrid(const TwoGridSetup& s);

struct InexactTwoGrid {
  DenseMatrix e;
  DenseMatrix b;       // from the restricted-smoother expression
  DenseMatrix b_inv;   // from the additive expression; b * b_inv checked = I
  double energy_norm;  // |e|_A, cross-checked against the eigenvalue formula
};
InexactTwoGrid build_inexact_twogrid(const TwoGridSetup& s);

// d1 = 1/(1 + lambda_max((Pt Mt P)^-1 (B_c - A_c))), d2 likewise with
// lambda_min. Positive for SPD B_c; a nonpositive denominator throws
// DegeneratePencil.
std::pair<double, double> deviation_extremes(const SpdMatrix& mt, const Prolongation& p,
                                             const SpdMatrix& bc, const SpdMatrix& ac);
std::pair<double, double> deviation_extremes(const TwoGridSetup& s);

// Extreme eigenvalues of (inv(A) Mt - I)(I - Pi) and (inv(A) Mt - I) Pi,
// computed through the symmetric congruence with sqrt(inv(A) - inv(Mt)).
// Both minima are zero and the maxima are k_tg - 1 and
// lambda_max(inv(A) Mt Pi) - 1; returned as computed, not as the theory
// constants, so callers can measure the slack.
struct ProjectionSplitExtremes {
  double complement_min;
  double complement_max;
  double range_min;
  double range_max;
};
ProjectionSplitExtremes projection_split_extremes(const SpdMatrix& a, const SpdMatrix& mt,
                                                  const Prolongation& p);

struct SpectralQuantities {
  double k_tg;
  double lam_max_a_inv_mt;     // lambda_max(inv(A) Mt)
  double lam_min_a_inv_mt;     // lambda_min(inv(A) Mt), >= 1
  double lam_max_a_inv_mt_pi;  // lambda_max(inv(A) Mt Pi)
  double d1;
  double d2;
};
SpectralQuantities spectral_quantities(const TwoGridSetup& s);

// Upper bound driven by the spectral equivalence between B_c and A_c alone;
// the classical comparison our two-sided bounds are measured against.
double spectral_equivalence_upper_bound(const TwoGridSetup& s);

struct BoundsReport {
  std::size_t n = 0;
  std::size_t n_c = 0;
  SpectralQuantities quantities{};
  std::string case_id;  // "i", "ii", or "iii"
  double lower = 0.0;
  double upper = 0.0;
  double actual = 0.0;       // |E|_A of the inexact method
  double notay_upper = 0.0;  // spectral_equivalence_upper_bound
  bool sandwich_ok = false;  // lower - 1e-9 <= actual <= upper + 1e-9
};

// Selects the case from (d1, d2), evaluates the matching lower/upper pair,
// and verifies the sandwich against the measured energy norm. Throws
// OutOfTheoryRange when d2 crosses the admissibility ceiling of the
// two upper cases.
BoundsReport analyze_two_grid(const TwoGridSetup& s);

}  // namespace mgcert
