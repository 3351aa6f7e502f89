#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "plr/cmatrix.hpp"
#include "plr/disorder.hpp"
#include "plr/errors.hpp"
#include "plr/hermitian.hpp"
#include "plr/quasifree.hpp"

// Exact desk-scale many-body simulator on the full 2^n space (n <= 10),
// used to validate the free-fermion reductions against brute force.
namespace plr::oracle {

inline constexpr std::size_t kMaxSites = 10;

inline void check_sites(std::size_t n, const char* what) {
  if (n < 1) throw ArgumentError(std::string(what) + ": n must be >= 1");
  if (n > kMaxSites)
    throw ResourceError(std::string(what) + ": n = " + std::to_string(n) +
                        " exceeds the dense cap of " + std::to_string(kMaxSites));
}

enum class SiteOp { Sx, Sy, Sz, Lower, Raise, C, Cdag };

namespace detail {

inline CMatrix pauli_x() {
  CMatrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}
inline CMatrix pauli_y() {
  CMatrix m(2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}
inline CMatrix pauli_z() {
  CMatrix m(2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}
// a = (sx - i sy)/2 maps up to down
inline CMatrix lowering() {
  CMatrix m(2);
  m(1, 0) = 1.0;
  return m;
}

// kron chain with factor `op` at site j (1-based) and `fill` on sites < j
inline CMatrix padded(const CMatrix& op, const CMatrix& fill, std::size_t j, std::size_t n) {
  CMatrix out = CMatrix::identity(1);
  const CMatrix id2 = CMatrix::identity(2);
  for (std::size_t s = 1; s <= n; ++s)
    out = kron(out, s == j ? op : (s < j ? fill : id2));
  return out;
}

}  // namespace detail

// Single-site operator embedded in the n-site space as an identity-padded
// Kronecker product; C/Cdag carry the full Jordan-Wigner sign string.
inline CMatrix build_site_operator(SiteOp kind, std::size_t j, std::size_t n) {
  check_sites(n, "build_site_operator");
  if (j < 1 || j > n)
    throw ArgumentError("build_site_operator: site " + std::to_string(j) + " out of range");
  const CMatrix id2 = CMatrix::identity(2);
  switch (kind) {
    case SiteOp::Sx:
      return detail::padded(detail::pauli_x(), id2, j, n);
    case SiteOp::Sy:
      return detail::padded(detail::pauli_y(), id2, j, n);
    case SiteOp::Sz:
      return detail::padded(detail::pauli_z(), id2, j, n);
    case SiteOp::Lower:
      return detail::padded(detail::lowering(), id2, j, n);
    case SiteOp::Raise:
      return detail::padded(detail::lowering(), id2, j, n).adjoint();
    case SiteOp::C:
      return detail::padded(detail::lowering(), detail::pauli_z(), j, n);
    case SiteOp::Cdag:
      return detail::padded(detail::lowering(), detail::pauli_z(), j, n).adjoint();
  }
  throw ArgumentError("build_site_operator: unknown kind");
}

// Spin-chain Hamiltonian: -sum (sx sx + sy sy) + sum V~_j sz_j, with
// V~_j = lambda V_j / j^alpha taken from the same arithmetic as the
// one-body construction.
inline CMatrix build_xy_hamiltonian(const DisorderConfig& config,
                                    const std::vector<double>& potential) {
  check_sites(config.n, "build_xy_hamiltonian");
  const OneBodyOperator one_body = build_one_body(config, potential);
  const std::size_t n = config.n;
  const CMatrix id2 = CMatrix::identity(2);
  CMatrix H(std::size_t{1} << n);

  auto two_site = [&](const CMatrix& op, std::size_t j) {
    CMatrix out = CMatrix::identity(1);
    for (std::size_t s = 1; s <= n; ++s) {
      if (s == j) {
        out = kron(out, op);
        ++s;  // op spans sites j, j+1
        continue;
      }
      out = kron(out, id2);
    }
    return out;
  };

  const CMatrix xx = kron(detail::pauli_x(), detail::pauli_x());
  const CMatrix yy = kron(detail::pauli_y(), detail::pauli_y());
  for (std::size_t j = 1; j < n; ++j) {
    H -= two_site(xx, j);
    H -= two_site(yy, j);
  }
  for (std::size_t j = 1; j <= n; ++j) {
    CMatrix sz = build_site_operator(SiteOp::Sz, j, n);
    sz *= cplx(one_body.diag[j - 1], 0.0);
    H += sz;
  }
  return H;
}

// 2 sum_{jk} (H_n)_{jk} c_j* c_k - (sum V~_j) I: the fermionic form the
// spin Hamiltonian must equal entrywise.
inline CMatrix fermion_quadratic_form(const OneBodyOperator& op) {
  const std::size_t n = op.size();
  check_sites(n, "fermion_quadratic_form");
  std::vector<CMatrix> c(n);
  for (std::size_t j = 1; j <= n; ++j) c[j - 1] = build_site_operator(SiteOp::C, j, n);

  CMatrix H(std::size_t{1} << n);
  for (std::size_t j = 0; j < n; ++j) {
    CMatrix term = c[j].adjoint() * c[j];
    term *= cplx(2.0 * op.diag[j], 0.0);
    H += term;
    if (j + 1 < n) {
      CMatrix hop = c[j].adjoint() * c[j + 1] + c[j + 1].adjoint() * c[j];
      hop *= cplx(2.0 * op.offdiag[j], 0.0);
      H += hop;
    }
  }
  double vsum = 0.0;
  for (double v : op.diag) vsum += v;
  CMatrix shift = CMatrix::identity(std::size_t{1} << n);
  shift *= cplx(-vsum, 0.0);
  H += shift;
  return H;
}

namespace detail {

inline void require_hermitian(const CMatrix& H, const char* what) {
  const double f = H.frobenius();
  if (H.hermiticity_defect() > 1e-12 * std::max(1.0, f))
    throw ArgumentError(std::string(what) + ": matrix is not Hermitian");
}

// U(t) = e^{-itH}
inline CMatrix evolution_operator(const HermitianEigen& eig, double t) {
  const std::size_t m = eig.vectors.dim();
  CMatrix phase(m);
  for (std::size_t j = 0; j < m; ++j) phase(j, j) = std::polar(1.0, -t * eig.values[j]);
  return eig.vectors * phase * eig.vectors.adjoint();
}

}  // namespace detail

// tau_t(A) = e^{itH} A e^{-itH} via dense eigendecomposition.
inline CMatrix heisenberg_evolve(const CMatrix& H, const CMatrix& A, double t) {
  if (H.dim() != A.dim()) throw ArgumentError("heisenberg_evolve: dimension mismatch");
  detail::require_hermitian(H, "heisenberg_evolve");
  const auto eig = hermitian_eigensystem(H);
  const CMatrix U = detail::evolution_operator(eig, -t);  // e^{+itH}
  return U * A * U.adjoint();
}

// Operator norm (largest singular value) via the Hermitian spectrum of M*M.
inline double operator_norm(const CMatrix& M) {
  const auto eig = hermitian_eigensystem(M.adjoint() * M);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

// ||[tau_t(A), B]||
inline double exact_commutator_norm(const CMatrix& H, const CMatrix& A, const CMatrix& B,
                                    double t) {
  if (H.dim() != A.dim() || H.dim() != B.dim())
    throw ArgumentError("exact_commutator_norm: dimension mismatch");
  return operator_norm(commutator(heisenberg_evolve(H, A, t), B));
}

// tr(N_S rho_t) with rho the diagonal product state and rho_t its
// Schroedinger evolution e^{-itH} rho e^{itH}. N_S and rho are diagonal in
// the computational basis, so only |U_ab|^2 enters.
inline double exact_number_expectation(const CMatrix& H, const ProductState& state,
                                       const std::vector<std::size_t>& sites, double t) {
  const std::size_t dim = H.dim();
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim)
    throw ArgumentError("exact_number_expectation: dimension is not a power of two");
  check_sites(n, "exact_number_expectation");
  state.validate(n);
  for (std::size_t j : sites)
    if (j < 1 || j > n)
      throw ArgumentError("exact_number_expectation: site " + std::to_string(j) +
                          " out of range");
  detail::require_hermitian(H, "exact_number_expectation");

  const auto eig = hermitian_eigensystem(H);
  const CMatrix U = detail::evolution_operator(eig, t);  // e^{-itH}

  // basis index bit (n - j) is 0 when site j is up
  auto ups_in_s = [&](std::size_t idx) {
    std::size_t c = 0;
    for (std::size_t j : sites) c += ((idx >> (n - j)) & 1u) == 0 ? 1 : 0;
    return static_cast<double>(c);
  };
  std::vector<double> rho(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    double p = 1.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const bool up = ((b >> (n - j)) & 1u) == 0;
      p *= up ? state.eta[j - 1] : 1.0 - state.eta[j - 1];
    }
    rho[b] = p;
  }

  double acc = 0.0;
  for (std::size_t a = 0; a < dim; ++a) {
    const double nsa = ups_in_s(a);
    if (nsa == 0.0) continue;
    double inner = 0.0;
    for (std::size_t b = 0; b < dim; ++b) inner += std::norm(U(a, b)) * rho[b];
    acc += nsa * inner;
  }
  return acc;
}

}  // namespace plr::oracle
