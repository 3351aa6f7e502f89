#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "plr/disorder.hpp"
#include "plr/errors.hpp"
#include "plr/tridiag.hpp"

namespace plr {

// Eigenvalues (ascending) and orthonormal eigenvectors of a one-body
// operator. Eigenvectors are stored column-major: column k is the
// normalized eigenvector of eigenvalues[k], sign-fixed so that its first
// appreciable entry is positive. Immutable after construction.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;  // column-major n x n
  std::size_t n = 0;

  // psi_{E_k}(site), 1-based site
  double psi(std::size_t k, std::size_t site) const {
    return eigenvectors[k * n + (site - 1)];
  }
  const double* column(std::size_t k) const { return eigenvectors.data() + k * n; }
};

namespace detail {

inline void fix_column_signs(std::vector<double>& U, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    double* v = U.data() + k * n;
    double vmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) vmax = std::max(vmax, std::abs(v[i]));
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(v[i]) > 1e-12 * vmax) {
        if (v[i] < 0.0)
          for (std::size_t m = 0; m < n; ++m) v[m] = -v[m];
        break;
      }
    }
  }
}

inline void check_site(std::size_t site, std::size_t n, const char* what) {
  if (site < 1 || site > n)
    throw ArgumentError(std::string(what) + ": site " + std::to_string(site) +
                        " out of range [1, " + std::to_string(n) + "]");
}

}  // namespace detail

// Full eigendecomposition of the symmetric tridiagonal operator.
// Deterministic for fixed input; throws NumericalError if the QL sweep or
// the inverse iteration fails to converge.
inline SpectralDecomposition diagonalize(const OneBodyOperator& H) {
  SpectralDecomposition out;
  out.n = H.size();
  if (out.n == 0) throw ArgumentError("diagonalize: empty operator");
  out.eigenvalues = tridiag_eigenvalues(H.diag, H.offdiag);
  out.eigenvectors = tridiag_eigenvectors(H.diag, H.offdiag, out.eigenvalues);
  detail::fix_column_signs(out.eigenvectors, out.n);
  return out;
}

// <delta_j, e^{-2itH} delta_k> = sum_E e^{-2itE} psi_E(j) psi_E(k).
// The factor 2 in the exponent is the module-wide dynamical convention;
// it appears here and nowhere else.
inline std::complex<double> propagator(const SpectralDecomposition& spec, std::size_t j,
                                       std::size_t k, double t) {
  detail::check_site(j, spec.n, "propagator");
  detail::check_site(k, spec.n, "propagator");
  std::complex<double> acc = 0.0;
  for (std::size_t m = 0; m < spec.n; ++m)
    acc += std::polar(spec.psi(m, j) * spec.psi(m, k), -2.0 * t * spec.eigenvalues[m]);
  return acc;
}

// Row j of e^{-2itH}: one pass over the eigenpairs, O(n^2).
inline std::vector<std::complex<double>> propagator_row(const SpectralDecomposition& spec,
                                                        std::size_t j, double t) {
  detail::check_site(j, spec.n, "propagator_row");
  const std::size_t n = spec.n;
  std::vector<std::complex<double>> row(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    const double w = spec.psi(m, j);
    if (w == 0.0) continue;
    const std::complex<double> ph = std::polar(w, -2.0 * t * spec.eigenvalues[m]);
    const double* col = spec.column(m);
    for (std::size_t i = 0; i < n; ++i) row[i] += ph * col[i];
  }
  return row;
}

// Eigenfunction correlator Q(j,k) = sum_E |psi_E(j)| |psi_E(k)|. Symmetric,
// and dominates |<delta_j, g(H) delta_k>| for any |g| <= 1, in particular
// the propagator amplitude at every time.
inline double eigenfunction_correlator(const SpectralDecomposition& spec, std::size_t j,
                                       std::size_t k) {
  detail::check_site(j, spec.n, "eigenfunction_correlator");
  detail::check_site(k, spec.n, "eigenfunction_correlator");
  double acc = 0.0;
  for (std::size_t m = 0; m < spec.n; ++m)
    acc += std::abs(spec.psi(m, j)) * std::abs(spec.psi(m, k));
  return acc;
}

}  // namespace plr
