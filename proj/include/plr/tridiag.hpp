#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "plr/errors.hpp"
#include "plr/rng.hpp"

namespace plr {

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr int kQlMaxIter = 60;

// Implicit-shift QL on a symmetric tridiagonal matrix. d holds the diagonal
// and receives the eigenvalues (unsorted); e holds the subdiagonal and is
// destroyed. If Z is non-null it must point at a column-major n x n array
// whose columns get the accumulated rotations (pass identity to obtain
// eigenvectors). Scalar is double or std::complex<double>.
template <class Scalar>
void ql_implicit_shift(std::vector<double>& d, std::vector<double>& e, Scalar* Z) {
  const std::size_t n = d.size();
  if (n <= 1) return;
  e.resize(n, 0.0);  // one guard slot past the end

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == kQlMaxIter)
          throw NumericalError("tridiagonal QL failed to converge at index " + std::to_string(l),
                               l);
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (Z) {
            Scalar* zi = Z + i * n;
            Scalar* zj = Z + (i + 1) * n;
            for (std::size_t k = 0; k < n; ++k) {
              const Scalar t = zj[k];
              zj[k] = s * zi[k] + c * t;
              zi[k] = c * zi[k] - s * t;
            }
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  e.resize(n > 0 ? n - 1 : 0);
}

// LU factors of (T - shift) with partial pivoting, tridiagonal storage.
struct ShiftedTriLU {
  std::vector<double> d, du, du2, dl;
  std::vector<unsigned char> swapped;

  void factor(const std::vector<double>& diag, const std::vector<double>& off, double shift,
              double pivot_floor) {
    const std::size_t n = diag.size();
    d.resize(n);
    du.assign(n > 1 ? n - 1 : 0, 0.0);
    dl.assign(n > 1 ? n - 1 : 0, 0.0);
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n > 1 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) du[i] = dl[i] = off[i];

    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (std::abs(d[i]) < pivot_floor) d[i] = std::copysign(pivot_floor, d[i]);
        const double m = dl[i] / d[i];
        dl[i] = m;
        d[i + 1] -= m * du[i];
      } else {
        swapped[i] = 1;
        const double m = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = m;
        const double tmp = d[i + 1];
        d[i + 1] = du[i] - m * tmp;
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -m * du2[i];
        }
        du[i] = tmp;
      }
    }
    if (std::abs(d[n - 1]) < pivot_floor) d[n - 1] = std::copysign(pivot_floor, d[n - 1]);
  }

  void solve(std::vector<double>& x) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        x[i + 1] -= dl[i] * x[i];
      } else {
        const double t = x[i];
        x[i] = x[i + 1];
        x[i + 1] = t - dl[i] * x[i];
      }
    }
    x[n - 1] /= d[n - 1];
    if (n > 1) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t i = n > 2 ? n - 2 : 0; i-- > 0;)
      x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  }
};

inline double norm2(const double* x, std::size_t n) {
  return std::sqrt(std::inner_product(x, x + n, x, 0.0));
}

}  // namespace detail

// Eigenvalues only, ascending. O(n^2).
inline std::vector<double> tridiag_eigenvalues(const std::vector<double>& diag,
                                               const std::vector<double>& offdiag) {
  std::vector<double> d = diag, e = offdiag;
  detail::ql_implicit_shift<double>(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

// Eigenvectors for precomputed eigenvalues via inverse iteration with a
// deterministic start vector per index, followed by re-orthogonalization
// of vectors whose eigenvalues fall inside a sliding window. Returns a
// column-major n x n array, column k for evals[k]. O(n^2) away from
// pathological clustering.
inline std::vector<double> tridiag_eigenvectors(const std::vector<double>& diag,
                                                const std::vector<double>& offdiag,
                                                const std::vector<double>& evals) {
  const std::size_t n = diag.size();
  std::vector<double> U(n * n);
  if (n == 0) return U;
  if (n == 1) {
    U[0] = 1.0;
    return U;
  }

  double scale = 2.0;
  for (double v : diag) scale = std::max(scale, 2.0 + std::abs(v));
  const double pivot_floor = detail::kEps * scale;

  detail::ShiftedTriLU lu;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    lu.factor(diag, offdiag, evals[k], pivot_floor);
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
      SplitMix64 gen(derive_seed(0x7c3a9d11e2f05b47ULL + attempt, k));
      for (auto& v : x) v = gen.next_unit() - 0.5;
      ok = true;
      for (int it = 0; it < 2; ++it) {
        lu.solve(x);
        double amax = 0.0;
        for (double v : x) amax = std::max(amax, std::abs(v));
        if (!(amax > 0.0) || !std::isfinite(amax)) {
          ok = false;
          break;
        }
        for (auto& v : x) v /= amax;  // guard the 2-norm against overflow
        const double nrm = detail::norm2(x.data(), n);
        for (auto& v : x) v /= nrm;
      }
    }
    if (!ok)
      throw NumericalError("inverse iteration failed for eigenvalue index " + std::to_string(k),
                           k);
    std::copy(x.begin(), x.end(), U.begin() + k * n);
  }

  // clean up orthogonality among close eigenvalues
  const double window = 1e-4 * scale;
  for (std::size_t k = 1; k < n; ++k) {
    std::size_t j0 = k;
    while (j0 > 0 && evals[k] - evals[j0 - 1] <= window) --j0;
    if (j0 == k) continue;
    double* vk = U.data() + k * n;
    for (std::size_t j = j0; j < k; ++j) {
      const double* vj = U.data() + j * n;
      const double dot = std::inner_product(vj, vj + n, vk, 0.0);
      for (std::size_t i = 0; i < n; ++i) vk[i] -= dot * vj[i];
    }
    const double nrm = detail::norm2(vk, n);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw NumericalError("re-orthogonalization degenerated at eigenvalue index " +
                               std::to_string(k),
                           k);
    for (std::size_t i = 0; i < n; ++i) vk[i] /= nrm;
  }
  return U;
}

}  // namespace plr
