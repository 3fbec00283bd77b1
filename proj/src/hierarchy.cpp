#include "mgcert/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mgcert/errors.hpp"
#include "mgcert/rng.hpp"
#include "mgcert/tolerances.hpp"

namespace mgcert {

void validate_partition(const BlockPartition& part, std::size_t n) {
  std::vector<char> seen(n, 0);
  std::size_t count = 0;
  for (const auto& group : {part.fine, part.coarse}) {
    for (std::size_t idx : group) {
      if (idx >= n) fail(ErrorKind::BadParameter, "partition index out of range");
      if (seen[idx]) fail(ErrorKind::BadParameter, "partition index repeated");
      seen[idx] = 1;
      ++count;
    }
  }
  if (count != n) fail(ErrorKind::BadParameter, "partition does not cover all indices");
}

Prolongation::Prolongation(DenseMatrix p) : p_(std::move(p)) {
  if (p_.empty()) fail(ErrorKind::BadDimension, "prolongation must be nonempty");
  if (p_.cols() > p_.rows()) fail(ErrorKind::BadDimension, "prolongation cannot widen the space");
  require_finite(p_, "P");
  const Spectrum s = sym_eig(transpose(p_) * p_);
  // Squared singular values; the rank gate is relative between the extremes.
  if (!(s.values.front() > tol::kRank * tol::kRank * s.values.back()))
    fail(ErrorKind::NotSpd, "prolongation is numerically rank deficient");
}

SpdMatrix laplacian_1d(std::size_t n) {
  if (n < 2) fail(ErrorKind::BadParameter, "1D Laplacian needs n >= 2");
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 2.0;
    if (i + 1 < n) {
      a(i, i + 1) = -1.0;
      a(i + 1, i) = -1.0;
    }
  }
  return SpdMatrix(std::move(a));
}

SpdMatrix laplacian_2d(std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) fail(ErrorKind::BadParameter, "2D Laplacian needs nx, ny >= 2");
  const DenseMatrix ax = laplacian_1d(nx).matrix();
  const DenseMatrix ay = laplacian_1d(ny).matrix();
  return SpdMatrix(kron(ax, DenseMatrix::identity(ny)) + kron(DenseMatrix::identity(nx), ay));
}

Prolongation linear_interpolation_1d(std::size_t n_fine) {
  if (n_fine < 3 || n_fine % 2 == 0)
    fail(ErrorKind::BadDimension, "1D interpolation needs an odd fine size 2m+1 with m >= 1");
  const std::size_t n_c = (n_fine - 1) / 2;
  DenseMatrix p(n_fine, n_c);
  for (std::size_t j = 0; j < n_c; ++j) {
    const std::size_t center = 2 * j + 1;
    p(center - 1, j) = 0.5;
    p(center, j) = 1.0;
    p(center + 1, j) = 0.5;
  }
  return Prolongation(std::move(p));
}

Prolongation bilinear_interpolation_2d(std::size_t nx, std::size_t ny) {
  const Prolongation px = linear_interpolation_1d(nx);
  const Prolongation py = linear_interpolation_1d(ny);
  return Prolongation(kron(px.matrix(), py.matrix()));
}

Prolongation ideal_interpolation(const SpdMatrix& a, const BlockPartition& part) {
  validate_partition(part, a.order());
  const std::size_t n_c = part.coarse.size();
  if (n_c == 0) fail(ErrorKind::BadDimension, "coarse set must be nonempty");
  DenseMatrix p(a.order(), n_c);
  if (!part.fine.empty()) {
    const SpdMatrix a_ff(submatrix(a.matrix(), part.fine, part.fine));
    const DenseMatrix w = a_ff.solve(submatrix(a.matrix(), part.fine, part.coarse));
    for (std::size_t i = 0; i < part.fine.size(); ++i)
      for (std::size_t j = 0; j < n_c; ++j) p(part.fine[i], j) = -w(i, j);
  }
  for (std::size_t j = 0; j < n_c; ++j) p(part.coarse[j], j) = 1.0;
  return Prolongation(std::move(p));
}

SpdMatrix galerkin(const SpdMatrix& a, const Prolongation& p) {
  if (p.fine_order() != a.order()) fail(ErrorKind::BadDimension, "prolongation does not match A");
  return SpdMatrix(symmetrize(transpose(p.matrix()) * (a.matrix() * p.matrix())));
}

NormalizedProlongation normalize_prolongation(const Prolongation& p) {
  const CholeskyFactor f = cholesky(symmetrize(transpose(p.matrix()) * p.matrix()));
  const DenseMatrix u_c = transpose(f.lower);
  const DenseMatrix sharp = p.matrix() * inverse(u_c);
  const DenseMatrix gram = transpose(sharp) * sharp;
  if (max_abs_diff(gram, DenseMatrix::identity(p.coarse_order())) > 1e-12)
    fail(ErrorKind::CrossCheckFailed, "normalized prolongation lost orthonormality");
  return {Prolongation(sharp), u_c};
}

DenseMatrix complement_basis(const Prolongation& p) {
  const std::size_t n = p.fine_order();
  const std::size_t n_c = p.coarse_order();
  DenseMatrix s(n, n - n_c);
  if (n_c == n) return s;
  const QrFactor qr = householder_qr(p.matrix());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + n_c < n; ++j) s(i, j) = qr.q(i, n_c + j);
  const double slack = spectral_norm(transpose(p.matrix()) * s);
  if (slack > 1e-12 * spectral_norm(p.matrix()) * spectral_norm(s))
    fail(ErrorKind::CrossCheckFailed, "complement basis is not orthogonal to range(P)");
  return s;
}

double cbs_constant_block(const SpdMatrix& a, const BlockPartition& part) {
  validate_partition(part, a.order());
  if (part.fine.empty() || part.coarse.empty()) return 0.0;
  const SpdMatrix a_ff(submatrix(a.matrix(), part.fine, part.fine));
  const SpdMatrix a_cc(submatrix(a.matrix(), part.coarse, part.coarse));
  const DenseMatrix a_fc = submatrix(a.matrix(), part.fine, part.coarse);
  const DenseMatrix mid = symmetrize(a_fc * a_cc.solve(transpose(a_fc)));
  const auto [lo, hi] = gen_eig_extremes(mid, a_ff);
  (void)lo;
  return std::sqrt(std::max(0.0, hi));
}

double cbs_constant_general(const SpdMatrix& w, const DenseMatrix& s, const Prolongation& p_sharp) {
  if (s.rows() != w.order() || p_sharp.fine_order() != w.order())
    fail(ErrorKind::BadDimension, "W, S, and the prolongation must share the fine order");
  if (s.cols() == 0) return 0.0;
  const DenseMatrix ws = w.matrix() * s;
  const DenseMatrix wp = w.matrix() * p_sharp.matrix();
  const SpdMatrix t(symmetrize(transpose(s) * ws));
  const SpdMatrix h(symmetrize(transpose(p_sharp.matrix()) * wp));
  const DenseMatrix g = transpose(s) * wp;
  const DenseMatrix mid = symmetrize(g * h.solve(transpose(g)));
  const auto [lo, hi] = gen_eig_extremes(mid, t);
  (void)lo;
  return std::sqrt(std::max(0.0, hi));
}

AlphaExample alpha_parameterized_example(double alpha, std::size_t n_f, std::size_t n_c) {
  if (!(alpha >= 0.0 && alpha < 1.0)) fail(ErrorKind::BadParameter, "alpha must lie in [0, 1)");
  if (n_f == 0 || n_c == 0) fail(ErrorKind::BadParameter, "block sizes must be positive");
  // Deterministic rotations so the construction is reproducible from the
  // arguments alone; the singular values are alpha times a geometric decay.
  Rng rng(0x414C5048ull ^ (static_cast<std::uint64_t>(n_f) << 20) ^ n_c);
  const DenseMatrix u = random_orthogonal(rng, n_f);
  const DenseMatrix v = random_orthogonal(rng, n_c);
  DenseMatrix sigma(n_f, n_c);
  double sv = alpha;
  for (std::size_t i = 0; i < std::min(n_f, n_c); ++i) {
    sigma(i, i) = sv;
    sv *= 0.55;
  }
  const DenseMatrix a_fc = u * sigma * transpose(v);

  const std::size_t n = n_f + n_c;
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
  for (std::size_t i = 0; i < n_f; ++i)
    for (std::size_t j = 0; j < n_c; ++j) {
      a(i, n_f + j) = a_fc(i, j);
      a(n_f + j, i) = a_fc(i, j);
    }

  BlockPartition part;
  for (std::size_t i = 0; i < n_f; ++i) part.fine.push_back(i);
  for (std::size_t j = 0; j < n_c; ++j) part.coarse.push_back(n_f + j);
  return {SpdMatrix(std::move(a)), std::move(part)};
}

Hierarchy::Hierarchy(std::vector<SpdMatrix> a, std::vector<Prolongation> p, std::vector<Smoother> m,
                     SpdMatrix a0_hat, int gamma)
    : a_(std::move(a)), p_(std::move(p)), m_(std::move(m)), a0_hat_(std::move(a0_hat)), gamma_(gamma) {
  if (a_.empty() || p_.size() + 1 != a_.size() || m_.size() != p_.size())
    fail(ErrorKind::BadDimension, "level stack needs L+1 matrices and L prolongations/smoothers");
  if (gamma_ < 1) fail(ErrorKind::BadParameter, "cycle index must be >= 1");
  for (std::size_t k = 1; k < a_.size(); ++k) {
    if (a_[k - 1].order() >= a_[k].order())
      fail(ErrorKind::BadDimension, "level sizes must increase strictly");
    const Prolongation& pk = p_[k - 1];
    if (pk.fine_order() != a_[k].order() || pk.coarse_order() != a_[k - 1].order())
      fail(ErrorKind::BadDimension, "prolongation shape does not bridge its levels");
    const DenseMatrix g = symmetrize(transpose(pk.matrix()) * (a_[k].matrix() * pk.matrix()));
    const double scale = std::max(1.0, max_abs(a_[k - 1].matrix()));
    if (max_abs_diff(g, a_[k - 1].matrix()) > 1e-12 * scale)
      fail(ErrorKind::BadParameter, "coarse matrix is not the Galerkin product of its parent");
    const double mscale = std::max(1.0, max_abs(a_[k].matrix()));
    if (max_abs_diff(m_[k - 1].a().matrix(), a_[k].matrix()) > 1e-12 * mscale)
      fail(ErrorKind::BadParameter, "smoother was built for a different level matrix");
  }
  if (a0_hat_.order() != a_[0].order())
    fail(ErrorKind::BadDimension, "coarsest surrogate has the wrong order");
  if (!is_spsd(a0_hat_.matrix() - a_[0].matrix()))
    fail(ErrorKind::NotSpd, "coarsest surrogate must dominate the coarsest matrix");
}

Hierarchy Hierarchy::with_coarsest_shift(double theta) const {
  if (!(theta >= 0.0)) fail(ErrorKind::BadParameter, "shift must be nonnegative");
  const Smoother& s1 = smoother(1);
  const DenseMatrix& p1 = p(1).matrix();
  const DenseMatrix pencil = symmetrize(transpose(p1) * (s1.mtilde().matrix() * p1));
  SpdMatrix hat(a_[0].matrix() + theta * pencil);
  return Hierarchy(a_, p_, m_, std::move(hat), gamma_);
}

Hierarchy Hierarchy::with_coarsest_scale(double c) const {
  if (!(c > 0.0 && c <= 1.0)) fail(ErrorKind::BadParameter, "scale must lie in (0, 1]");
  SpdMatrix hat((1.0 / c) * a_[0].matrix());
  return Hierarchy(a_, p_, m_, std::move(hat), gamma_);
}

Hierarchy Hierarchy::with_gamma(int gamma) const { return Hierarchy(a_, p_, m_, a0_hat_, gamma); }

namespace {

Smoother make_smoother(const SpdMatrix& a, SmootherKind kind, double omega) {
  return kind == SmootherKind::Jacobi ? Smoother::weighted_jacobi(a, omega)
                                      : Smoother::gauss_seidel(a);
}

std::size_t halved(std::size_t n) {
  if (n < 3 || n % 2 == 0)
    fail(ErrorKind::BadDimension, "grid size must be odd and >= 3 to coarsen");
  return (n - 1) / 2;
}

Hierarchy assemble(std::vector<SpdMatrix> a_fine_first, std::vector<Prolongation> p_fine_first,
                   SmootherKind kind, double omega, int gamma) {
  std::vector<SpdMatrix> a(a_fine_first.rbegin(), a_fine_first.rend());
  std::vector<Prolongation> p(p_fine_first.rbegin(), p_fine_first.rend());
  std::vector<Smoother> m;
  m.reserve(p.size());
  for (std::size_t k = 1; k < a.size(); ++k) m.push_back(make_smoother(a[k], kind, omega));
  SpdMatrix hat = a.front();
  return Hierarchy(std::move(a), std::move(p), std::move(m), std::move(hat), gamma);
}

}  // namespace

Hierarchy build_poisson_hierarchy_1d(std::size_t n_fine, std::size_t levels, SmootherKind kind,
                                     double omega, int gamma) {
  if (levels < 1) fail(ErrorKind::BadParameter, "need at least one level");
  std::vector<SpdMatrix> a{laplacian_1d(n_fine)};
  std::vector<Prolongation> p;
  std::size_t n = n_fine;
  for (std::size_t l = 0; l < levels; ++l) {
    p.push_back(linear_interpolation_1d(n));
    a.push_back(galerkin(a.back(), p.back()));
    n = halved(n);
  }
  return assemble(std::move(a), std::move(p), kind, omega, gamma);
}

Hierarchy build_poisson_hierarchy_2d(std::size_t nx, std::size_t ny, std::size_t levels,
                                     SmootherKind kind, double omega, int gamma) {
  if (levels < 1) fail(ErrorKind::BadParameter, "need at least one level");
  std::vector<SpdMatrix> a{laplacian_2d(nx, ny)};
  std::vector<Prolongation> p;
  std::size_t cx = nx;
  std::size_t cy = ny;
  for (std::size_t l = 0; l < levels; ++l) {
    p.push_back(bilinear_interpolation_2d(cx, cy));
    a.push_back(galerkin(a.back(), p.back()));
    cx = halved(cx);
    cy = halved(cy);
  }
  return assemble(std::move(a), std::move(p), kind, omega, gamma);
}

}  // namespace mgcert
