#include "mgcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mgcert/errors.hpp"
#include "mgcert/tolerances.hpp"

namespace mgcert {

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) acc += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(acc);
}

// Solve L X = B with L lower triangular.
DenseMatrix forward_solve(const DenseMatrix& l, const DenseMatrix& b) {
  DenseMatrix x = b;
  const std::size_t n = l.rows();
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x(i, j);
      for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * x(k, j);
      x(i, j) = acc / l(i, i);
    }
  }
  return x;
}

void require_matching_order(const DenseMatrix& a, std::size_t order, const char* label) {
  if (a.rows() != order || a.cols() != order) {
    fail(ErrorKind::BadDimension, std::string(label) + ": order mismatch");
  }
}

}  // namespace

Spectrum sym_eig(const DenseMatrix& s) {
  require_square(s, "sym_eig");
  require_finite(s, "sym_eig");
  if (!is_symmetric(s, tol::kSym)) {
    fail(ErrorKind::NonSymmetric, "sym_eig: input fails the relative symmetry gate");
  }
  const std::size_t n = s.rows();
  DenseMatrix a = symmetrize(s);
  DenseMatrix v = DenseMatrix::identity(n);

  const double fnorm = frobenius_norm(a);
  const double stop = tol::kJacobiOff * fnorm;

  if (n > 1 && fnorm > 0.0) {
    int sweep = 0;
    for (; sweep < tol::kJacobiSweepCap; ++sweep) {
      if (off_diagonal_norm(a) <= stop) break;
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (apq == 0.0) continue;
          const double app = a(p, p);
          const double aqq = a(q, q);
          const double theta = (aqq - app) / (2.0 * apq);
          double t;
          if (std::abs(theta) > 1e12) {
            t = 0.5 / theta;  // asymptotic tangent, avoids overflow in theta^2
          } else {
            t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          }
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double sn = t * c;
          const double tau = sn / (1.0 + c);

          a(p, p) = app - t * apq;
          a(q, q) = aqq + t * apq;
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            if (i == p || i == q) continue;
            const double aip = a(i, p);
            const double aiq = a(i, q);
            a(i, p) = aip - sn * (aiq + tau * aip);
            a(p, i) = a(i, p);
            a(i, q) = aiq + sn * (aip - tau * aiq);
            a(q, i) = a(i, q);
          }
          for (std::size_t i = 0; i < n; ++i) {
            const double vip = v(i, p);
            const double viq = v(i, q);
            v(i, p) = vip - sn * (viq + tau * vip);
            v(i, q) = viq + sn * (vip - tau * viq);
          }
        }
      }
    }
    if (off_diagonal_norm(a) > stop) {
      fail(ErrorKind::NoConvergence,
           "sym_eig: off-diagonal mass above threshold after " +
               std::to_string(tol::kJacobiSweepCap) + " sweeps");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  Spectrum out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

CholeskyFactor cholesky(const DenseMatrix& s) {
  require_square(s, "cholesky");
  require_finite(s, "cholesky");
  const std::size_t n = s.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, s(i, i));
  if (max_diag <= 0.0) fail(ErrorKind::NotSpd, "cholesky: no positive diagonal entry");

  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= tol::kSpd * max_diag) {
      fail(ErrorKind::NotSpd, "cholesky: pivot " + std::to_string(j) + " below gate");
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = s(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / l(j, j);
    }
  }
  return CholeskyFactor{std::move(l)};
}

std::vector<double> chol_solve(const CholeskyFactor& f, const std::vector<double>& rhs) {
  const DenseMatrix& l = f.lower;
  const std::size_t n = l.rows();
  if (rhs.size() != n) fail(ErrorKind::BadDimension, "chol_solve: rhs size");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = rhs[i];
    for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * y[k];
    y[i] = acc / l(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= l(k, ii) * y[k];
    y[ii] = acc / l(ii, ii);
  }
  return y;
}

DenseMatrix chol_solve(const CholeskyFactor& f, const DenseMatrix& rhs) {
  const std::size_t n = f.lower.rows();
  if (rhs.rows() != n) fail(ErrorKind::BadDimension, "chol_solve: rhs rows");
  DenseMatrix x(n, rhs.cols());
  std::vector<double> col(n);
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = rhs(i, j);
    const std::vector<double> sol = chol_solve(f, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

SpdMatrix::SpdMatrix(DenseMatrix m) {
  require_square(m, "SpdMatrix");
  require_finite(m, "SpdMatrix");
  if (!is_symmetric(m, tol::kSym)) {
    fail(ErrorKind::NonSymmetric, "SpdMatrix: input fails the relative symmetry gate");
  }
  m_ = symmetrize(m);
  chol_ = cholesky(m_);
}

std::vector<double> SpdMatrix::solve(const std::vector<double>& rhs) const {
  return chol_solve(chol_, rhs);
}

DenseMatrix SpdMatrix::solve(const DenseMatrix& rhs) const { return chol_solve(chol_, rhs); }

DenseMatrix SpdMatrix::inverse() const {
  return chol_solve(chol_, DenseMatrix::identity(order()));
}

LuFactor lu_factor(const DenseMatrix& m) {
  require_square(m, "lu_factor");
  require_finite(m, "lu_factor");
  const std::size_t n = m.rows();
  const double amax = max_abs(m);
  if (amax == 0.0) fail(ErrorKind::Singular, "lu_factor: zero matrix");

  LuFactor f;
  f.lu = m;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  DenseMatrix& a = f.lu;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= 1e-14 * amax) {
      fail(ErrorKind::Singular, "lu_factor: pivot " + std::to_string(k) + " below gate");
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      const double lik = a(i, k);
      if (lik == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
  return f;
}

std::vector<double> lu_solve(const LuFactor& f, const std::vector<double>& rhs) {
  const DenseMatrix& a = f.lu;
  const std::size_t n = a.rows();
  if (rhs.size() != n) fail(ErrorKind::BadDimension, "lu_solve: rhs size");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[f.perm[i]];
  for (std::size_t i = 0; i < n; ++i) {
    double acc = x[i];
    for (std::size_t k = 0; k < i; ++k) acc -= a(i, k) * x[k];
    x[i] = acc;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= a(ii, k) * x[k];
    x[ii] = acc / a(ii, ii);
  }
  return x;
}

DenseMatrix lu_solve(const LuFactor& f, const DenseMatrix& rhs) {
  const std::size_t n = f.lu.rows();
  if (rhs.rows() != n) fail(ErrorKind::BadDimension, "lu_solve: rhs rows");
  DenseMatrix x(n, rhs.cols());
  std::vector<double> col(n);
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = rhs(i, j);
    const std::vector<double> sol = lu_solve(f, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

DenseMatrix inverse(const DenseMatrix& m) {
  return lu_solve(lu_factor(m), DenseMatrix::identity(m.rows()));
}

std::pair<double, double> gen_eig_extremes(const DenseMatrix& a, const SpdMatrix& b) {
  require_square(a, "gen_eig_extremes");
  require_matching_order(a, b.order(), "gen_eig_extremes");
  if (!is_symmetric(a, tol::kSym)) {
    fail(ErrorKind::NonSymmetric, "gen_eig_extremes: left matrix fails the symmetry gate");
  }
  const DenseMatrix as = symmetrize(a);
  const DenseMatrix& l = b.chol().lower;
  const DenseMatrix y = forward_solve(l, as);
  const DenseMatrix c = symmetrize(transpose(forward_solve(l, transpose(y))));
  const Spectrum sp = sym_eig(c);
  return {sp.values.front(), sp.values.back()};
}

bool is_spsd(const DenseMatrix& s) {
  const Spectrum sp = sym_eig(s);
  const double lo = sp.values.front();
  const double norm = std::max(std::abs(lo), std::abs(sp.values.back()));
  return lo >= -tol::kSpsd * norm;
}

SpdMatrix spd_sqrt(const SpdMatrix& s) {
  const Spectrum sp = sym_eig(s.matrix());
  if (sp.values.front() <= 0.0) {
    fail(ErrorKind::NotSpd, "spd_sqrt: nonpositive eigenvalue");
  }
  const std::size_t n = s.order();
  DenseMatrix scaled(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = std::sqrt(sp.values[j]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) = sp.vectors(i, j) * r;
  }
  return SpdMatrix(symmetrize(scaled * transpose(sp.vectors)));
}

DenseMatrix spsd_sqrt(const DenseMatrix& s) {
  const Spectrum sp = sym_eig(s);
  const double norm = std::max(std::abs(sp.values.front()), std::abs(sp.values.back()));
  if (sp.values.front() < -tol::kSpsd * norm) {
    fail(ErrorKind::NotSpd, "spsd_sqrt: input is not positive semidefinite");
  }
  const std::size_t n = s.rows();
  DenseMatrix scaled(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = std::sqrt(std::max(sp.values[j], 0.0));
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) = sp.vectors(i, j) * r;
  }
  return symmetrize(scaled * transpose(sp.vectors));
}

double spectral_norm(const DenseMatrix& x) {
  if (x.empty()) return 0.0;
  const DenseMatrix gram =
      x.rows() <= x.cols() ? symmetrize(x * transpose(x)) : symmetrize(transpose(x) * x);
  const Spectrum sp = sym_eig(gram);
  return std::sqrt(std::max(sp.values.back(), 0.0));
}

double operator_energy_norm(const DenseMatrix& e, const SpdMatrix& a) {
  require_square(e, "operator_energy_norm");
  require_matching_order(e, a.order(), "operator_energy_norm");
  const SpdMatrix r = spd_sqrt(a);
  const DenseMatrix x = r.matrix() * e;
  const DenseMatrix t = transpose(r.solve(transpose(x)));  // R E inv(R)
  // Asymmetry is judged against max(1, scale): a near-zero operator is
  // self-adjoint even though its roundoff residue is not.
  if (max_abs_diff(t, transpose(t)) > tol::kSym * std::max(1.0, max_abs(t))) {
    fail(ErrorKind::SimilarityNotSymmetric,
         "operator_energy_norm: operator is not self-adjoint in the A inner product");
  }
  const Spectrum sp = sym_eig(symmetrize(t));
  return std::max(std::abs(sp.values.front()), std::abs(sp.values.back()));
}

QrFactor householder_qr(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  if (n == 0 || m == 0 || m > n) fail(ErrorKind::BadDimension, "householder_qr: need rows >= cols >= 1");

  QrFactor f;
  f.q = DenseMatrix::identity(n);
  f.r = a;
  std::vector<double> v(n);

  for (std::size_t k = 0; k < m; ++k) {
    double colnorm = 0.0;
    for (std::size_t i = k; i < n; ++i) colnorm += f.r(i, k) * f.r(i, k);
    colnorm = std::sqrt(colnorm);
    if (colnorm == 0.0) continue;

    const double sign = f.r(k, k) >= 0.0 ? 1.0 : -1.0;
    const double alpha = -sign * colnorm;
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t i = k; i < n; ++i) v[i] = f.r(i, k);
    v[k] -= alpha;
    double vtv = 0.0;
    for (std::size_t i = k; i < n; ++i) vtv += v[i] * v[i];
    if (vtv == 0.0) continue;

    for (std::size_t j = k; j < m; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i] * f.r(i, j);
      const double factor = 2.0 * s / vtv;
      for (std::size_t i = k; i < n; ++i) f.r(i, j) -= factor * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t l = k; l < n; ++l) s += f.q(i, l) * v[l];
      const double factor = 2.0 * s / vtv;
      for (std::size_t l = k; l < n; ++l) f.q(i, l) -= factor * v[l];
    }
  }

  // Entries below the diagonal are exact zeros of the factorization.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m && j < i; ++j) f.r(i, j) = 0.0;
  return f;
}

}  // namespace mgcert
