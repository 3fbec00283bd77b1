#pragma once

// Recursive multigrid cycles as vector solvers and as explicit error
// propagators, the level quantities that summarize a hierarchy, fixed-point
// roots of the cycle recursion, and the resulting certification of a
// convergence factor for every level at once.

#include <cstddef>
#include <vector>

#include "mgcert/hierarchy.hpp"
#include "mgcert/linalg.hpp"
#include "mgcert/matrix.hpp"

namespace mgcert {

// One cycle at level k (1..L): presmooth, restrict, gamma recursive
// corrections from a zero initial guess (the surrogate coarsest solve at
// k = 1), prolong, postsmooth with the transposed sweep.
std::vector<double> mg_cycle(const Hierarchy& h, std::size_t k, const std::vector<double>& f,
                             const std::vector<double>& u0);

// Explicit error propagator of one cycle at level k, built bottom-up from the
// coarsest level. Every level's matrix is validated on the way: its
// A-symmetrized spectrum must sit inside [-1e-10, 1) and a random-vector
// cycle must reproduce the matrix action to 1e-11; either failure throws
// CrossCheckFailed.
DenseMatrix mg_error_matrix(const Hierarchy& h, std::size_t k);

// The coarse surrogate a cycle at level k implicitly applies in place of the
// Galerkin matrix: A_{k-1} (I - E^gamma)^-1 with E the level-(k-1)
// propagator. SPD for every convergent hierarchy; requires k >= 2.
SpdMatrix implicit_coarse_operator(const Hierarchy& h, std::size_t k);

struct MgLevelQuantities {
  std::vector<double> sigma_tg;   // exact two-grid factor per level, k = 1..L
  std::vector<double> sigma_img;  // cycle factor per level, k = 1..L
  double sigma_l = 0.0;           // max_k sigma_tg[k]
  double tau_l = 0.0;             // max_k lambda_max(inv(Pkt Mtk Pk) A_{k-1})
  double eps_l = 0.0;             // min_k lambda_min(inv(Mtk) A_k)
};

// Throws NontrivialCaseViolated unless 0 < sigma_l < 1 - eps_l, the regime
// the certification theory covers.
MgLevelQuantities level_quantities(const Hierarchy& h);

struct FixedPointResult {
  int gamma = 0;
  double x = 0.0;  // smallest root of F_gamma in the bracket
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  bool multiple_roots = false;  // the scan saw more than one sign change
};

// Smallest root of
//   F(x) = (s e (1-x^g) + t (1-e)(1-s) x^g) / (e (1-x^g) + t (1-s) x^g) - x
// in (sigma_l, 1 - eps_l), located by a 1000-point scan and bisection to
// |F| <= 1e-13. Throws BadBracket when the sign facts F(lo) > 0 > F(hi)
// fail, i.e. the inputs are outside the theory.
FixedPointResult fixed_point_root(double sigma_l, double tau_l, double eps_l, int gamma);

struct CycleRootClosedForms {
  double x1 = 0.0;      // V-cycle root in closed form
  double x2_hat = 0.0;  // W-cycle upper bound in closed form
};

// Quadratic-formula root for gamma = 1 and the closed-form upper bound for
// gamma = 2. Cross-checked internally against the bisection roots: x1 must
// match to 1e-10 and the gamma = 2 root must not exceed x2_hat + 1e-10.
CycleRootClosedForms cycle_root_closed_forms(double sigma_l, double tau_l, double eps_l);

// Ceiling for the coarsest-surrogate pencil in the certification condition:
// eps (x - sigma) / ((1 - sigma)(1 - eps - x)).
double coarse_condition_threshold(double sigma_l, double eps_l, double x_gamma);

struct CertificationLevelRow {
  std::size_t k = 0;
  std::size_t n_k = 0;
  double sigma_tg = 0.0;
  double sigma_img = 0.0;
};

struct CertificationReport {
  std::vector<CertificationLevelRow> levels;
  double sigma_l = 0.0;
  double tau_l = 0.0;
  double eps_l = 0.0;
  int gamma = 0;
  double x_gamma = 0.0;
  double x1 = 0.0;
  double x2_hat = 0.0;
  double threshold = 0.0;   // coarse_condition_threshold at x_gamma
  bool condition24 = false; // surrogate pencil inside [0, threshold]
  bool remark44 = false;    // alternate spectrum certificate
  bool verified = false;    // condition24 and sigma_img <= x_gamma + 1e-9 everywhere
};

// Full certification pass: level quantities, the root x_gamma, both closed
// forms, the surrogate condition, and the per-level verdicts. Bound failures
// are reported in the booleans, never thrown.
CertificationReport certify_multigrid(const Hierarchy& h, int gamma);

}  // namespace mgcert
