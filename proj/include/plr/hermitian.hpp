#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include "plr/cmatrix.hpp"
#include "plr/errors.hpp"
#include "plr/tridiag.hpp"

namespace plr {

struct HermitianEigen {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column j = eigenvector of values[j]
};

namespace detail {

inline cplx cinner(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t n) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Elementary reflector H = I - tau v v^H with v = (1, x...) such that
// H^H (alpha, x...) = (beta, 0...), beta real.
inline void make_reflector(cplx& alpha, std::vector<cplx>& x, std::size_t len, cplx& tau,
                           double& beta) {
  double xnorm = 0.0;
  for (std::size_t i = 0; i < len; ++i) xnorm += std::norm(x[i]);
  xnorm = std::sqrt(xnorm);
  if (xnorm == 0.0 && alpha.imag() == 0.0) {
    tau = 0.0;
    beta = alpha.real();
    return;
  }
  beta = -std::copysign(
      std::sqrt(alpha.real() * alpha.real() + alpha.imag() * alpha.imag() + xnorm * xnorm),
      alpha.real());
  tau = cplx((beta - alpha.real()) / beta, -alpha.imag() / beta);
  const cplx scal = 1.0 / (alpha - beta);
  for (std::size_t i = 0; i < len; ++i) x[i] *= scal;
  alpha = beta;
}

}  // namespace detail

// Full eigendecomposition of a Hermitian matrix: unblocked Householder
// reduction to real symmetric tridiagonal form, implicit-shift QL on the
// tridiagonal with the unitary basis accumulated in complex arithmetic.
inline HermitianEigen hermitian_eigensystem(const CMatrix& A) {
  const std::size_t m = A.dim();
  if (m == 0) throw ArgumentError("hermitian_eigensystem: empty matrix");

  CMatrix W = A;
  std::vector<double> d(m), e(m > 1 ? m - 1 : 0);
  std::vector<cplx> tau(m > 1 ? m - 1 : 0, 0.0);
  std::vector<std::vector<cplx>> vs(m > 1 ? m - 1 : 0);

  std::vector<cplx> v(m), y(m);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const std::size_t L = m - 1 - i;  // trailing block size
    cplx alpha = W(i + 1, i);
    for (std::size_t r = 0; r + 1 < L; ++r) v[r + 1] = W(i + 2 + r, i);
    std::vector<cplx> xtail(v.begin() + 1, v.begin() + L);
    double beta;
    detail::make_reflector(alpha, xtail, L - 1, tau[i], beta);
    e[i] = beta;
    v[0] = 1.0;
    for (std::size_t r = 0; r + 1 < L; ++r) v[r + 1] = xtail[r];
    vs[i].assign(v.begin(), v.begin() + L);
    if (tau[i] != cplx(0.0, 0.0)) {
      // y = tau * A22 v, then y -= (tau/2)(y^H v) v; A22 -= v y^H + y v^H
      for (std::size_t r = 0; r < L; ++r) {
        cplx s = 0.0;
        for (std::size_t c = 0; c < L; ++c) s += W(i + 1 + r, i + 1 + c) * v[c];
        y[r] = tau[i] * s;
      }
      cplx yv = 0.0;
      for (std::size_t r = 0; r < L; ++r) yv += std::conj(y[r]) * v[r];
      const cplx corr = -0.5 * tau[i] * yv;
      for (std::size_t r = 0; r < L; ++r) y[r] += corr * v[r];
      for (std::size_t r = 0; r < L; ++r)
        for (std::size_t c = 0; c < L; ++c)
          W(i + 1 + r, i + 1 + c) -= v[r] * std::conj(y[c]) + y[r] * std::conj(v[c]);
    }
  }
  for (std::size_t j = 0; j < m; ++j) d[j] = W(j, j).real();

  // back-accumulate Q = H(0) H(1) ... H(m-2), column-major
  std::vector<cplx> Q(m * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) Q[j * m + j] = 1.0;
  for (std::size_t i = m > 1 ? m - 1 : 0; i-- > 0;) {
    if (tau[i] == cplx(0.0, 0.0)) continue;
    const std::size_t L = m - 1 - i;
    const auto& vi = vs[i];
    for (std::size_t col = 0; col < m; ++col) {
      cplx* q = Q.data() + col * m + (i + 1);
      cplx dot = 0.0;
      for (std::size_t r = 0; r < L; ++r) dot += std::conj(vi[r]) * q[r];
      dot *= tau[i];
      for (std::size_t r = 0; r < L; ++r) q[r] -= dot * vi[r];
    }
  }

  detail::ql_implicit_shift<cplx>(d, e, Q.data());

  // sort ascending, permuting columns
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  HermitianEigen out;
  out.values.resize(m);
  out.vectors = CMatrix(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.values[j] = d[perm[j]];
    const cplx* col = Q.data() + perm[j] * m;
    for (std::size_t i = 0; i < m; ++i) out.vectors(i, j) = col[i];
  }
  return out;
}

}  // namespace plr
