#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "plr/errors.hpp"

namespace plr {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major. Sized for desk-scale many-body
// algebra (dim <= 1024), not for performance.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, cplx(0.0, 0.0)) {}

  static CMatrix identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  CMatrix& operator+=(const CMatrix& o) {
    check_same(o, "+=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    check_same(o, "-=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  CMatrix& operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    a.check_same(b, "*");
    const std::size_t n = a.dim_;
    CMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx(0.0, 0.0)) continue;
        const cplx* brow = b.a_.data() + k * n;
        cplx* crow = c.a_.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
      }
    return c;
  }

  CMatrix adjoint() const {
    CMatrix c(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) c(j, i) = std::conj((*this)(i, j));
    return c;
  }

  // Frobenius norm
  double frobenius() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double hermiticity_defect() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        s += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
    return std::sqrt(s);
  }

  friend CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

  friend CMatrix kron(const CMatrix& a, const CMatrix& b) {
    const std::size_t na = a.dim_, nb = b.dim_;
    CMatrix c(na * nb);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < na; ++j) {
        const cplx aij = a(i, j);
        if (aij == cplx(0.0, 0.0)) continue;
        for (std::size_t k = 0; k < nb; ++k)
          for (std::size_t l = 0; l < nb; ++l) c(i * nb + k, j * nb + l) = aij * b(k, l);
      }
    return c;
  }

 private:
  void check_same(const CMatrix& o, const char* what) const {
    if (dim_ != o.dim_)
      throw ArgumentError(std::string("CMatrix") + what + ": dimension mismatch");
  }

  std::size_t dim_ = 0;
  std::vector<cplx> a_;
};

}  // namespace plr
