#include "mgcert/multigrid.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mgcert/errors.hpp"
#include "mgcert/hierarchy.hpp"
#include "mgcert/linalg.hpp"
#include "mgcert/matrix.hpp"
#include "mgcert/rng.hpp"
#include "mgcert/smoother.hpp"
#include "mgcert/twogrid.hpp"

using namespace mgcert;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::runtime_error("expected a failure");
}

double max_abs_vec_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  return worst;
}

// The propagator action extracted from the solver alone: with u* = 0 and
// f = 0, the error w is mapped to -MG(0, -w).
std::vector<double> cycle_error_action(const Hierarchy& h, std::size_t k,
                                       const std::vector<double>& w) {
  const std::size_t n = h.order(k);
  std::vector<double> u0(n);
  for (std::size_t i = 0; i < n; ++i) u0[i] = -w[i];
  std::vector<double> out = mg_cycle(h, k, std::vector<double>(n, 0.0), u0);
  for (auto& v : out) v = -v;
  return out;
}

}  // namespace

TEST_CASE("cycle keeps the solution fixed and matches the propagator") {
  for (int gamma : {1, 2}) {
    Hierarchy h = build_poisson_hierarchy_1d(15, 2, SmootherKind::Jacobi, 2.0 / 3.0, gamma);
    Rng rng(100 + gamma);
    for (std::size_t k = 1; k <= h.levels(); ++k) {
      const std::size_t n = h.order(k);
      std::vector<double> ustar(n), u0(n);
      for (auto& v : ustar) v = rng.uniform(-1.0, 1.0);
      for (auto& v : u0) v = rng.uniform(-1.0, 1.0);
      const std::vector<double> f = h.a(k).matrix() * ustar;

      CHECK(max_abs_vec_diff(mg_cycle(h, k, f, ustar), ustar) <= 1e-12);

      const DenseMatrix e = mg_error_matrix(h, k);
      std::vector<double> diff(n);
      for (std::size_t i = 0; i < n; ++i) diff[i] = ustar[i] - u0[i];
      const std::vector<double> err_matrix = e * diff;
      std::vector<double> err_cycle = mg_cycle(h, k, f, u0);
      for (std::size_t i = 0; i < n; ++i) err_cycle[i] = ustar[i] - err_cycle[i];
      CHECK(max_abs_vec_diff(err_cycle, err_matrix) <= 1e-11);
    }
  }
}

TEST_CASE("single-level cycle is the exact two-grid method") {
  Hierarchy h = build_poisson_hierarchy_1d(7, 1, SmootherKind::GaussSeidel, 1.0, 1);
  const DenseMatrix e = mg_error_matrix(h, 1);
  ExactTwoGrid tg = build_exact_twogrid(TwoGridSetup::exact(h.smoother(1), h.p(1)));
  CHECK(max_abs_diff(e, tg.e) <= 1e-12);
}

TEST_CASE("power iteration on the solver reproduces the top-level factor") {
  Hierarchy h = build_poisson_hierarchy_1d(15, 2, SmootherKind::Jacobi, 2.0 / 3.0, 2);
  MgLevelQuantities q = level_quantities(h);

  const std::size_t k = 2;
  const DenseMatrix& a = h.a(k).matrix();
  std::vector<double> v(h.order(k), 1.0);
  v[0] = 1.25;  // break any unlucky symmetry in the start vector
  double rayleigh = 0.0;
  for (int it = 0; it < 4000; ++it) {
    const std::vector<double> ev = cycle_error_action(h, k, v);
    rayleigh = dot(v, a * ev) / dot(v, a * v);
    const double scale = 1.0 / std::sqrt(dot(ev, a * ev));
    v = ev;
    for (auto& x : v) x *= scale;
  }
  CHECK(std::abs(rayleigh - q.sigma_img[k - 1]) <= 1e-8);
}

TEST_CASE("implicit coarse operator turns the cycle into an inexact two-grid method") {
  for (int gamma : {1, 2}) {
    Hierarchy h = build_poisson_hierarchy_1d(15, 2, SmootherKind::Jacobi, 2.0 / 3.0, gamma);
    SpdMatrix bc = implicit_coarse_operator(h, 2);
    TwoGridSetup setup(h.smoother(2), h.p(2), bc);

    InexactTwoGrid itg = build_inexact_twogrid(setup);
    CHECK(max_abs_diff(itg.e, mg_error_matrix(h, 2)) <= 1e-10);

    // The implicit surrogate never falls below the Galerkin matrix.
    const auto [d1, d2] = deviation_extremes(setup);
    CHECK(d2 <= 1.0 + 1e-12);
    CHECK(d1 > 0.0);
  }

  // More recursive corrections pull the surrogate toward the Galerkin matrix.
  Hierarchy h1 = build_poisson_hierarchy_1d(15, 2, SmootherKind::Jacobi, 2.0 / 3.0, 1);
  const DenseMatrix bc1 = implicit_coarse_operator(h1, 2).matrix();
  const DenseMatrix bc2 = implicit_coarse_operator(h1.with_gamma(2), 2).matrix();
  const Spectrum order = sym_eig(bc1 - bc2);
  CHECK(order.values.front() >= -1e-10 * std::max(1.0, frobenius_norm(bc1)));
}

TEST_CASE("level quantities agree with square-root congruence oracles") {
  Hierarchy h = build_poisson_hierarchy_1d(31, 4, SmootherKind::Jacobi, 2.0 / 3.0, 1);
  MgLevelQuantities q = level_quantities(h);
  REQUIRE(q.sigma_tg.size() == 4);

  double tau_oracle = 0.0;
  double eps_oracle = 1e300;
  for (std::size_t k = 1; k <= h.levels(); ++k) {
    const SpdMatrix& a = h.a(k);
    const SpdMatrix& mt = h.smoother(k).mtilde();
    const DenseMatrix& pm = h.p(k).matrix();

    const SpdMatrix gram(symmetrize(transpose(pm) * (mt.matrix() * pm)));
    const DenseMatrix gih = spd_sqrt(gram).inverse();
    tau_oracle = std::max(
        tau_oracle, sym_eig(gih * h.a(k - 1).matrix() * gih).values.back());

    const DenseMatrix mih = spd_sqrt(mt).inverse();
    eps_oracle = std::min(eps_oracle, sym_eig(mih * a.matrix() * mih).values.front());

    const double k_val = k_tg(a, mt, h.p(k));
    CHECK(std::abs(q.sigma_tg[k - 1] - (1.0 - 1.0 / k_val)) <= 1e-12);

    // The cycle can never beat its exact two-grid floor and must converge.
    CHECK(q.sigma_img[k - 1] >= q.sigma_tg[k - 1] - 1e-10);
    CHECK(q.sigma_img[k - 1] < 1.0);

    // Symmetrized spectrum of the propagator stays inside [0, 1) up to noise.
    const SpdMatrix r = spd_sqrt(a);
    const DenseMatrix x = r.matrix() * mg_error_matrix(h, k);
    const Spectrum sp = sym_eig(symmetrize(transpose(r.solve(transpose(x)))));
    CHECK(sp.values.front() >= -1e-10);
    CHECK(sp.values.back() < 1.0);
    CHECK(std::abs(sp.values.back() - q.sigma_img[k - 1]) <= 1e-10);
  }
  CHECK(std::abs(q.tau_l - tau_oracle) <= 1e-10 * std::max(1.0, tau_oracle));
  CHECK(std::abs(q.eps_l - eps_oracle) <= 1e-10);
  CHECK(q.sigma_l > 0.0);
  CHECK(q.sigma_l < 1.0 - q.eps_l);
  CHECK(q.eps_l > 0.0);
  CHECK(q.eps_l <= q.tau_l);

  double sig_max = 0.0;
  for (double s : q.sigma_tg) sig_max = std::max(sig_max, s);
  CHECK(q.sigma_l == sig_max);
}

TEST_CASE("degenerate one-smoother hierarchy trips the nontrivial-case gate") {
  // A = I with M = I makes every exact two-grid step perfect: sigma_l = 0.
  SpdMatrix a1(DenseMatrix::identity(2));
  DenseMatrix pm(2, 1);
  pm(0, 0) = 1.0;
  Prolongation p(pm);
  SpdMatrix a0 = galerkin(a1, p);
  Smoother sm = Smoother::from_matrix(a1, DenseMatrix::identity(2));
  Hierarchy h({a0, a1}, {p}, {sm}, a0, 1);
  CHECK(kind_of([&] { level_quantities(h); }) == ErrorKind::NontrivialCaseViolated);
}

TEST_CASE("fixed point root: closed forms, special case, and gamma decay") {
  // sigma = 0.5, tau = 0.25, eps = 0.2: the quadratic gives x1 = 2/3.
  FixedPointResult r1 = fixed_point_root(0.5, 0.25, 0.2, 1);
  CHECK(std::abs(r1.x - 2.0 / 3.0) <= 1e-10);
  CHECK(r1.bracket_lo == 0.5);
  CHECK(r1.bracket_hi == 0.8);
  CHECK(r1.gamma == 1);
  CHECK(!r1.multiple_roots);
  CHECK(r1.iterations <= 200);

  // tau (1 - sigma) = eps: the rational equation degenerates, root 5/7.
  FixedPointResult r2 = fixed_point_root(0.5, 0.4, 0.2, 1);
  CHECK(std::abs(r2.x - 5.0 / 7.0) <= 1e-12);

  // Strictly decreasing in gamma, inside the bracket, limit sigma_l.
  double prev = 1.0;
  for (int gamma = 1; gamma <= 8; ++gamma) {
    FixedPointResult r = fixed_point_root(0.5, 0.25, 0.2, gamma);
    CHECK(r.x > 0.5);
    CHECK(r.x < 0.8);
    CHECK(r.x < prev);
    prev = r.x;
  }
  CHECK(prev - 0.5 <= 0.02);

  CHECK(kind_of([] { fixed_point_root(0.9, 1.0, 0.2, 1); }) == ErrorKind::BadBracket);
  CHECK(kind_of([] { fixed_point_root(0.0, 1.0, 0.2, 1); }) == ErrorKind::BadBracket);
  CHECK(kind_of([] { fixed_point_root(0.5, 0.1, 0.2, 1); }) == ErrorKind::BadBracket);
  CHECK(kind_of([] { fixed_point_root(0.5, 0.25, 0.2, 0); }) == ErrorKind::BadParameter);
}

TEST_CASE("closed forms dominate the bisection roots on random admissible triples") {
  {
    CycleRootClosedForms f = cycle_root_closed_forms(0.5, 0.25, 0.2);
    CHECK(std::abs(f.x1 - 2.0 / 3.0) <= 1e-12);
    CycleRootClosedForms g = cycle_root_closed_forms(0.5, 0.4, 0.2);
    CHECK(std::abs(g.x1 - 5.0 / 7.0) <= 1e-12);
    CHECK(std::abs(g.x2_hat - 1.0 / (1.0 + std::sqrt(0.4))) <= 1e-12);
  }

  Rng rng(424242);
  for (int trial = 0; trial < 30; ++trial) {
    const double sigma = rng.uniform(0.05, 0.85);
    const double eps = (1.0 - sigma) * rng.uniform(0.05, 0.9);
    const double tau = eps * (1.0 + rng.uniform(0.0, 4.0));

    CycleRootClosedForms f = cycle_root_closed_forms(sigma, tau, eps);
    const double x1 = fixed_point_root(sigma, tau, eps, 1).x;
    const double x2 = fixed_point_root(sigma, tau, eps, 2).x;
    CHECK(std::abs(f.x1 - x1) <= 1e-10);
    CHECK(x2 <= f.x2_hat + 1e-10);
    CHECK(sigma < x2);
    CHECK(x2 <= x1);
    CHECK(x1 < 1.0 - eps);
    CHECK(f.x2_hat <= x1 + 1e-12);
  }

  CHECK(kind_of([] { cycle_root_closed_forms(0.0, 0.25, 0.2); }) == ErrorKind::BadParameter);
  CHECK(kind_of([] { cycle_root_closed_forms(0.9, 1.0, 0.2); }) == ErrorKind::BadParameter);
}

TEST_CASE("certification: exact coarsest solve verifies at both cycle indices") {
  Hierarchy h = build_poisson_hierarchy_1d(15, 2, SmootherKind::Jacobi, 2.0 / 3.0, 1);
  for (int gamma : {1, 2}) {
    CertificationReport r = certify_multigrid(h, gamma);
    CHECK(r.gamma == gamma);
    CHECK(r.condition24);
    CHECK(r.remark44);
    CHECK(r.verified);
    REQUIRE(r.levels.size() == 2);
    CHECK(r.levels[0].k == 1);
    CHECK(r.levels[0].n_k == 7);
    CHECK(r.levels[1].n_k == 15);
    for (const auto& row : r.levels) {
      CHECK(row.sigma_img <= r.x_gamma + 1e-9);
      CHECK(row.sigma_tg <= row.sigma_img + 1e-10);
    }
    CHECK(r.sigma_l < r.x_gamma);
    CHECK(r.x_gamma < 1.0 - r.eps_l);
    if (gamma == 1) CHECK(std::abs(r.x_gamma - r.x1) <= 1e-10);
    if (gamma == 2) CHECK(r.x_gamma <= r.x2_hat + 1e-10);
    CHECK(r.threshold > 0.0);
  }

  // W-cycle certifies a strictly smaller factor than the V-cycle.
  CHECK(certify_multigrid(h, 2).x_gamma < certify_multigrid(h, 1).x_gamma);
}

TEST_CASE("certification: shifted coarsest solve at half the threshold") {
  Hierarchy base = build_poisson_hierarchy_1d(15, 2, SmootherKind::GaussSeidel, 1.0, 1);
  for (int gamma : {1, 2}) {
    CertificationReport probe = certify_multigrid(base, gamma);
    Hierarchy shifted = base.with_coarsest_shift(0.5 * probe.threshold);
    CertificationReport r = certify_multigrid(shifted, gamma);
    CHECK(r.condition24);
    CHECK(r.verified);
    for (const auto& row : r.levels) CHECK(row.sigma_img <= r.x_gamma + 1e-9);
    // The perturbation leaves the level constants untouched.
    CHECK(std::abs(r.x_gamma - probe.x_gamma) <= 1e-12);
    CHECK(std::abs(r.threshold - probe.threshold) <= 1e-12);
  }

  // Far beyond the ceiling the certificate must refuse, without throwing.
  CertificationReport probe = certify_multigrid(base, 1);
  Hierarchy far = base.with_coarsest_shift(50.0 * probe.threshold);
  CertificationReport r = certify_multigrid(far, 1);
  CHECK(!r.condition24);
  CHECK(!r.verified);
}

TEST_CASE("certification: scaled coarsest solve through the alternate certificate") {
  Hierarchy base = build_poisson_hierarchy_1d(15, 2, SmootherKind::Jacobi, 2.0 / 3.0, 1);
  CertificationReport probe = certify_multigrid(base, 1);
  const double floor =
      (1.0 - probe.eps_l - probe.x_gamma) / (1.0 - probe.eps_l - probe.sigma_l);
  REQUIRE(floor > 0.0);
  REQUIRE(floor < 1.0);

  Hierarchy scaled = base.with_coarsest_scale(0.5 * (1.0 + floor));
  CertificationReport r = certify_multigrid(scaled, 1);
  CHECK(r.remark44);
  for (const auto& row : r.levels) CHECK(row.sigma_img <= r.x_gamma + 1e-9);

  // Scaling below the alternate floor loses that certificate.
  Hierarchy weak = base.with_coarsest_scale(0.9 * floor);
  CHECK(!certify_multigrid(weak, 1).remark44);
}

TEST_CASE("cycle argument validation") {
  Hierarchy h = build_poisson_hierarchy_1d(7, 1, SmootherKind::Jacobi, 2.0 / 3.0, 1);
  std::vector<double> f(7, 0.0);
  CHECK(kind_of([&] { mg_cycle(h, 0, f, f); }) == ErrorKind::BadParameter);
  CHECK(kind_of([&] { mg_cycle(h, 2, f, f); }) == ErrorKind::BadParameter);
  std::vector<double> small(3, 0.0);
  CHECK(kind_of([&] { mg_cycle(h, 1, small, small); }) == ErrorKind::BadDimension);
  CHECK(kind_of([&] { implicit_coarse_operator(h, 1); }) == ErrorKind::BadParameter);
}
