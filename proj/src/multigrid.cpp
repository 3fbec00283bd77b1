#include "mgcert/multigrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "mgcert/errors.hpp"
#include "mgcert/rng.hpp"
#include "mgcert/smoother.hpp"
#include "mgcert/tolerances.hpp"
#include "mgcert/twogrid.hpp"

namespace mgcert {

namespace {

void require_level(const Hierarchy& h, std::size_t k) {
  if (k < 1 || k > h.levels()) fail(ErrorKind::BadParameter, "level index outside 1..L");
}

std::vector<double> sub(const std::vector<double>& x, const std::vector<double>& y) {
  return axpy(-1.0, y, x);
}

// R E inv(R) with R = sqrt(A): the coordinates where an A-self-adjoint
// propagator becomes symmetric. Asymmetry beyond roundoff at the operator's
// own scale means the input was not a cycle propagator.
DenseMatrix hat_coords(const DenseMatrix& e, const SpdMatrix& r) {
  const DenseMatrix x = r.matrix() * e;
  const DenseMatrix t = transpose(r.solve(transpose(x)));
  if (max_abs_diff(t, transpose(t)) > tol::kSym * std::max(1.0, max_abs(t))) {
    fail(ErrorKind::SimilarityNotSymmetric, "cycle propagator is not A-self-adjoint");
  }
  return symmetrize(t);
}

DenseMatrix sym_power(const DenseMatrix& ehat, int gamma) {
  DenseMatrix acc = ehat;
  for (int i = 1; i < gamma; ++i) acc = symmetrize(acc * ehat);
  return acc;
}

// inv(R) X inv(R) for symmetric X, symmetrized against roundoff.
DenseMatrix sqrt_sandwich_inv(const SpdMatrix& r, const DenseMatrix& x) {
  const DenseMatrix y = r.solve(x);
  return symmetrize(transpose(r.solve(transpose(y))));
}

// Propagators E^(1..top), built bottom-up. Each level is validated twice
// before it is allowed to feed the next one: the symmetrized spectrum must
// sit inside [-1e-10, 1), and one cycle on a random problem must reproduce
// the matrix action to 1e-11.
std::vector<DenseMatrix> error_chain(const Hierarchy& h, std::size_t top) {
  require_level(h, top);
  std::vector<DenseMatrix> chain;
  chain.reserve(top);
  for (std::size_t k = 1; k <= top; ++k) {
    const SpdMatrix& a = h.a(k);
    const Smoother& sm = h.smoother(k);
    const DenseMatrix& pm = h.p(k).matrix();
    const std::size_t n = a.order();

    // Approximate coarse inverse applied by the correction step: inv(a0_hat)
    // at the bottom, (I - E^gamma) inv(A_{k-1}) above it.
    DenseMatrix coarse_inv;
    if (k == 1) {
      coarse_inv = h.a0_hat().inverse();
    } else {
      const SpdMatrix r = spd_sqrt(h.a(k - 1));
      const DenseMatrix pow = sym_power(hat_coords(chain.back(), r), h.gamma());
      coarse_inv = sqrt_sandwich_inv(r, DenseMatrix::identity(r.order()) - pow);
    }
    const DenseMatrix correction = pm * (coarse_inv * (transpose(pm) * a.matrix()));
    DenseMatrix e =
        sm.post_error() * ((DenseMatrix::identity(n) - correction) * sm.pre_error());

    const Spectrum sp = sym_eig(hat_coords(e, spd_sqrt(a)));
    if (sp.values.front() < -1e-10 || sp.values.back() >= 1.0) {
      fail(ErrorKind::CrossCheckFailed, "cycle spectrum escaped [0, 1) at a level");
    }

    Rng rng(0x4D474B00ull + static_cast<std::uint64_t>(k));
    std::vector<double> ustar(n), u0(n);
    for (auto& v : ustar) v = rng.uniform(-1.0, 1.0);
    for (auto& v : u0) v = rng.uniform(-1.0, 1.0);
    const std::vector<double> f = a.matrix() * ustar;
    const std::vector<double> by_cycle = sub(ustar, mg_cycle(h, k, f, u0));
    const std::vector<double> by_matrix = e * sub(ustar, u0);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(by_cycle[i] - by_matrix[i]));
    }
    if (worst > 1e-11) {
      fail(ErrorKind::CrossCheckFailed, "cycle solve and propagator matrix disagree");
    }

    chain.push_back(std::move(e));
  }
  return chain;
}

double rational_iterate(double sigma, double tau, double eps, double xg) {
  const double num = sigma * eps * (1.0 - xg) + tau * (1.0 - eps) * (1.0 - sigma) * xg;
  const double den = eps * (1.0 - xg) + tau * (1.0 - sigma) * xg;
  return num / den;
}

void require_admissible_triple(double sigma, double tau, double eps, ErrorKind kind) {
  if (!(sigma > 0.0) || !(eps > 0.0) || !(sigma < 1.0 - eps)) {
    fail(kind, "level quantities outside the open certification regime");
  }
  if (!(tau >= eps)) fail(kind, "tau below eps contradicts the pencil restriction");
}

}  // namespace

std::vector<double> mg_cycle(const Hierarchy& h, std::size_t k, const std::vector<double>& f,
                             const std::vector<double>& u0) {
  require_level(h, k);
  const SpdMatrix& a = h.a(k);
  if (f.size() != a.order() || u0.size() != a.order()) {
    fail(ErrorKind::BadDimension, "vectors do not match the level order");
  }
  const Smoother& sm = h.smoother(k);
  const DenseMatrix& pm = h.p(k).matrix();

  const std::vector<double> u1 = axpy(1.0, sm.m_inv() * sub(f, a.matrix() * u0), u0);
  const std::vector<double> r = transpose(pm) * sub(f, a.matrix() * u1);

  std::vector<double> ec(r.size(), 0.0);
  if (k == 1) {
    ec = h.a0_hat().solve(r);
  } else {
    for (int it = 0; it < h.gamma(); ++it) ec = mg_cycle(h, k - 1, r, ec);
  }

  const std::vector<double> u2 = axpy(1.0, pm * ec, u1);
  return axpy(1.0, transpose(sm.m_inv()) * sub(f, a.matrix() * u2), u2);
}

DenseMatrix mg_error_matrix(const Hierarchy& h, std::size_t k) {
  return error_chain(h, k).back();
}

SpdMatrix implicit_coarse_operator(const Hierarchy& h, std::size_t k) {
  require_level(h, k);
  if (k < 2) fail(ErrorKind::BadParameter, "the implicit surrogate needs a level below");
  const DenseMatrix e = mg_error_matrix(h, k - 1);
  const SpdMatrix r = spd_sqrt(h.a(k - 1));
  const DenseMatrix pow = sym_power(hat_coords(e, r), h.gamma());
  // B_c = R inv(I - Ehat^gamma) R; the SpdMatrix round trip proves I - Ehat^gamma
  // is definite before it is inverted.
  const DenseMatrix mid = SpdMatrix(DenseMatrix::identity(r.order()) - pow).inverse();
  return SpdMatrix(symmetrize(r.matrix() * (mid * r.matrix())));
}

MgLevelQuantities level_quantities(const Hierarchy& h) {
  const std::size_t levels = h.levels();
  const std::vector<DenseMatrix> chain = error_chain(h, levels);

  MgLevelQuantities q;
  q.sigma_tg.resize(levels);
  q.sigma_img.resize(levels);
  q.tau_l = 0.0;
  q.eps_l = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= levels; ++k) {
    const SpdMatrix& a = h.a(k);
    const SpdMatrix& mt = h.smoother(k).mtilde();
    const DenseMatrix& pm = h.p(k).matrix();

    q.sigma_tg[k - 1] = 1.0 - 1.0 / k_tg(a, mt, h.p(k));
    q.sigma_img[k - 1] = operator_energy_norm(chain[k - 1], a);

    const SpdMatrix gram(symmetrize(transpose(pm) * (mt.matrix() * pm)));
    q.tau_l = std::max(q.tau_l, gen_eig_extremes(h.a(k - 1).matrix(), gram).second);
    q.eps_l = std::min(q.eps_l, gen_eig_extremes(a.matrix(), mt).first);
  }
  q.sigma_l = *std::max_element(q.sigma_tg.begin(), q.sigma_tg.end());

  for (std::size_t k = 0; k < levels; ++k) {
    if (q.sigma_img[k] < q.sigma_tg[k] - 1e-10) {
      fail(ErrorKind::CrossCheckFailed, "a cycle factor fell below its exact two-grid floor");
    }
  }
  if (!(q.eps_l > 0.0) || q.eps_l > q.tau_l + 1e-12) {
    fail(ErrorKind::CrossCheckFailed, "level quantities lost their ordering");
  }
  if (!(q.sigma_l > 0.0) || !(q.sigma_l < 1.0 - q.eps_l)) {
    fail(ErrorKind::NontrivialCaseViolated,
         "certification needs 0 < sigma_l < 1 - eps_l");
  }
  return q;
}

FixedPointResult fixed_point_root(double sigma_l, double tau_l, double eps_l, int gamma) {
  if (gamma < 1) fail(ErrorKind::BadParameter, "cycle index must be at least 1");
  require_admissible_triple(sigma_l, tau_l, eps_l, ErrorKind::BadBracket);

  const double lo = sigma_l;
  const double hi = 1.0 - eps_l;
  const auto f = [&](double x) {
    return rational_iterate(sigma_l, tau_l, eps_l, std::pow(x, gamma)) - x;
  };
  if (!(f(lo) > 0.0) || !(f(hi) < 0.0)) {
    fail(ErrorKind::BadBracket, "sign facts fail at the bracket ends");
  }

  // Scan for the first down-crossing; count every sign change so a
  // multi-root bracket is flagged instead of silently resolved.
  int changes = 0;
  double seg_lo = lo;
  double seg_hi = hi;
  bool found = false;
  double prev_x = lo;
  double prev_f = f(lo);
  for (int i = 1; i <= tol::kBracketScan; ++i) {
    const double x = lo + (hi - lo) * i / tol::kBracketScan;
    const double fx = f(x);
    if (prev_f > 0.0 && fx <= 0.0) {
      ++changes;
      if (!found) {
        seg_lo = prev_x;
        seg_hi = x;
        found = true;
      }
    } else if (prev_f <= 0.0 && fx > 0.0) {
      ++changes;
    }
    prev_x = x;
    prev_f = fx;
  }

  double a = seg_lo;
  double b = seg_hi;
  double mid = 0.5 * (a + b);
  int iters = 0;
  while (iters < tol::kBisectIterCap) {
    mid = 0.5 * (a + b);
    const double fm = f(mid);
    ++iters;
    if (std::abs(fm) <= tol::kRoot) break;
    if (fm > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  if (std::abs(f(mid)) > tol::kRoot) {
    fail(ErrorKind::NoConvergence, "bisection stalled above the residual target");
  }

  FixedPointResult out;
  out.gamma = gamma;
  out.x = mid;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.iterations = iters;
  out.multiple_roots = changes > 1;
  return out;
}

CycleRootClosedForms cycle_root_closed_forms(double sigma_l, double tau_l, double eps_l) {
  require_admissible_triple(sigma_l, tau_l, eps_l, ErrorKind::BadParameter);

  const double mu =
      1.0 + sigma_l - tau_l * (1.0 - eps_l) * (1.0 - sigma_l) / eps_l;
  const double disc =
      mu * mu - 4.0 * sigma_l * (1.0 - (tau_l / eps_l) * (1.0 - sigma_l));
  CycleRootClosedForms out;
  out.x1 = 2.0 * sigma_l / (mu + std::sqrt(std::max(0.0, disc)));

  if (std::abs(tau_l * (1.0 - sigma_l) - eps_l) <= 1e-12) {
    // Degenerate rational equation: both closed forms collapse to one
    // quadratic whose stable root is written with the rationalized formula.
    out.x2_hat =
        2.0 * sigma_l / (1.0 + std::sqrt(1.0 - 4.0 * sigma_l * (1.0 - sigma_l - eps_l)));
  } else {
    out.x2_hat = rational_iterate(sigma_l, tau_l, eps_l, out.x1 * out.x1);
  }

  const double x1_bisect = fixed_point_root(sigma_l, tau_l, eps_l, 1).x;
  if (std::abs(out.x1 - x1_bisect) > 1e-10) {
    fail(ErrorKind::CrossCheckFailed, "closed-form and bisection roots disagree");
  }
  const double x2_bisect = fixed_point_root(sigma_l, tau_l, eps_l, 2).x;
  if (x2_bisect > out.x2_hat + 1e-10) {
    fail(ErrorKind::CrossCheckFailed, "closed-form bound fell below the true root");
  }
  return out;
}

double coarse_condition_threshold(double sigma_l, double eps_l, double x_gamma) {
  if (!(sigma_l < x_gamma) || !(x_gamma < 1.0 - eps_l)) {
    fail(ErrorKind::BadParameter, "the root must sit strictly inside the bracket");
  }
  return eps_l * (x_gamma - sigma_l) / ((1.0 - sigma_l) * (1.0 - eps_l - x_gamma));
}

CertificationReport certify_multigrid(const Hierarchy& h, int gamma) {
  if (gamma < 1) fail(ErrorKind::BadParameter, "cycle index must be at least 1");
  const Hierarchy local = (h.gamma() == gamma) ? h : h.with_gamma(gamma);

  const MgLevelQuantities q = level_quantities(local);
  const FixedPointResult root = fixed_point_root(q.sigma_l, q.tau_l, q.eps_l, gamma);
  const CycleRootClosedForms forms = cycle_root_closed_forms(q.sigma_l, q.tau_l, q.eps_l);

  CertificationReport r;
  for (std::size_t k = 1; k <= local.levels(); ++k) {
    CertificationLevelRow row;
    row.k = k;
    row.n_k = local.order(k);
    row.sigma_tg = q.sigma_tg[k - 1];
    row.sigma_img = q.sigma_img[k - 1];
    r.levels.push_back(row);
  }
  r.sigma_l = q.sigma_l;
  r.tau_l = q.tau_l;
  r.eps_l = q.eps_l;
  r.gamma = gamma;
  r.x_gamma = root.x;
  r.x1 = forms.x1;
  r.x2_hat = forms.x2_hat;
  r.threshold = coarse_condition_threshold(q.sigma_l, q.eps_l, root.x);

  const SpdMatrix& mt1 = local.smoother(1).mtilde();
  const DenseMatrix& p1 = local.p(1).matrix();
  const SpdMatrix gram1(symmetrize(transpose(p1) * (mt1.matrix() * p1)));
  const DenseMatrix dev = local.a0_hat().matrix() - local.a(0).matrix();
  const auto [dev_lo, dev_hi] = gen_eig_extremes(dev, gram1);
  r.condition24 = dev_lo >= -1e-12 && dev_hi <= r.threshold + 1e-12;

  const auto [spec_lo, spec_hi] = gen_eig_extremes(local.a(0).matrix(), local.a0_hat());
  const double spec_floor = (1.0 - q.eps_l - root.x) / (1.0 - q.eps_l - q.sigma_l);
  r.remark44 = spec_lo >= spec_floor - 1e-12 && spec_hi <= 1.0 + 1e-12;

  bool levels_ok = true;
  for (double s : q.sigma_img) levels_ok = levels_ok && s <= root.x + 1e-9;
  r.verified = r.condition24 && levels_ok;
  return r;
}

}  // namespace mgcert
