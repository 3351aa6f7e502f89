#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "plr/disorder.hpp"
#include "plr/spectral.hpp"
#include "support/jacobi.hpp"

using namespace plr;

namespace {

SpectralDecomposition random_instance(std::size_t n, double lambda, std::uint64_t seed,
                                      std::uint64_t index = 0) {
  DisorderConfig cfg{n, lambda, 0.5, {1.0}, seed};
  return diagonalize(build_one_body(cfg, sample_potential(cfg, index)));
}

double max_residual(const OneBodyOperator& op, const SpectralDecomposition& spec) {
  const std::size_t n = op.size();
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double r2 = 0.0;
    const double* v = spec.column(k);
    for (std::size_t i = 0; i < n; ++i) {
      double hv = op.diag[i] * v[i];
      if (i > 0) hv += op.offdiag[i - 1] * v[i - 1];
      if (i + 1 < n) hv += op.offdiag[i] * v[i + 1];
      r2 += (hv - spec.eigenvalues[k] * v[i]) * (hv - spec.eigenvalues[k] * v[i]);
    }
    worst = std::max(worst, std::sqrt(r2));
  }
  return worst;
}

double max_orthonormality_defect(const SpectralDecomposition& spec) {
  const std::size_t n = spec.n;
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += spec.column(a)[i] * spec.column(b)[i];
      if (a == b) dot -= 1.0;
      worst = std::max(worst, std::abs(dot));
    }
  return worst;
}

}  // namespace

TEST_CASE("closed-form spectra") {
  SECTION("n=1") {
    OneBodyOperator op{{0.37}, {}};
    const auto spec = diagonalize(op);
    REQUIRE(spec.eigenvalues == std::vector<double>{0.37});
    REQUIRE(spec.psi(0, 1) == 1.0);
  }
  SECTION("n=2 free") {
    const auto spec = diagonalize(free_chain(2));
    REQUIRE(spec.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(spec.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE(spec.psi(0, 1) == Catch::Approx(r).margin(1e-12));
    REQUIRE(spec.psi(0, 2) == Catch::Approx(-r).margin(1e-12));
    REQUIRE(spec.psi(1, 1) == Catch::Approx(r).margin(1e-12));
    REQUIRE(spec.psi(1, 2) == Catch::Approx(r).margin(1e-12));
  }
  SECTION("n=3 free: roots of x^3 - 2x") {
    const auto spec = diagonalize(free_chain(3));
    REQUIRE(spec.eigenvalues[0] == Catch::Approx(-std::sqrt(2.0)).margin(1e-12));
    REQUIRE(spec.eigenvalues[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(spec.eigenvalues[2] == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
    // cross-check against the dense brute-force solver
    OneBodyOperator op = free_chain(3);
    const auto dense = testsupport::jacobi_eigenvalues(
        testsupport::dense_from_tridiag(op.diag, op.offdiag), 3);
    for (std::size_t i = 0; i < 3; ++i)
      REQUIRE(spec.eigenvalues[i] == Catch::Approx(dense[i]).margin(1e-12));
  }
}

TEST_CASE("agreement with dense Jacobi on random instances up to n=8") {
  for (std::size_t n : {2u, 3u, 5u, 8u}) {
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      DisorderConfig cfg{n, 2.5, 0.5, {1.0}, 1000 + rep};
      const auto op = build_one_body(cfg, sample_potential(cfg, rep));
      const auto spec = diagonalize(op);
      const auto dense = testsupport::jacobi_eigenvalues(
          testsupport::dense_from_tridiag(op.diag, op.offdiag), n);
      for (std::size_t i = 0; i < n; ++i)
        REQUIRE(spec.eigenvalues[i] == Catch::Approx(dense[i]).margin(1e-10));
    }
  }
}

TEST_CASE("decomposition invariants on medium instances") {
  for (std::size_t n : {5u, 64u, 300u}) {
    DisorderConfig cfg{n, 4.0, 0.5, {1.0}, 2024};
    const auto op = build_one_body(cfg, sample_potential(cfg, 1));
    const auto spec = diagonalize(op);

    REQUIRE(std::is_sorted(spec.eigenvalues.begin(), spec.eigenvalues.end()));
    REQUIRE(max_residual(op, spec) <= 1e-10 * std::max(1.0, op.norm_bound()));
    REQUIRE(max_orthonormality_defect(spec) <= 1e-10);

    const double gersh = op.norm_bound();
    for (double e : spec.eigenvalues) {
      REQUIRE(e >= -gersh - 1e-12);
      REQUIRE(e <= gersh + 1e-12);
    }
    double trace = 0.0, dsum = 0.0;
    for (double e : spec.eigenvalues) trace += e;
    for (double d : op.diag) dsum += d;
    REQUIRE(std::abs(trace - dsum) <= 1e-9 * static_cast<double>(n));
  }
}

TEST_CASE("extreme disorder keeps the decomposition well conditioned") {
  DisorderConfig cfg{600, 50.0, 0.5, {1.0}, 8888};
  const auto op = build_one_body(cfg, sample_potential(cfg, 0));
  const auto spec = diagonalize(op);
  REQUIRE(max_residual(op, spec) <= 1e-10 * std::max(1.0, op.norm_bound()));
  REQUIRE(max_orthonormality_defect(spec) <= 1e-10);
  for (const auto& c : propagator_row(spec, 1, 5.0)) REQUIRE(std::isfinite(std::abs(c)));
}

TEST_CASE("diagonalize is deterministic and sign-fixed") {
  DisorderConfig cfg{40, 1.5, 0.5, {1.0}, 4242};
  const auto op = build_one_body(cfg, sample_potential(cfg, 0));
  const auto a = diagonalize(op);
  const auto b = diagonalize(op);
  REQUIRE(a.eigenvalues == b.eigenvalues);
  REQUIRE(a.eigenvectors == b.eigenvectors);
  for (std::size_t k = 0; k < a.n; ++k) {
    double vmax = 0.0;
    for (std::size_t i = 1; i <= a.n; ++i) vmax = std::max(vmax, std::abs(a.psi(k, i)));
    for (std::size_t i = 1; i <= a.n; ++i) {
      if (std::abs(a.psi(k, i)) > 1e-12 * vmax) {
        REQUIRE(a.psi(k, i) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("propagator closed forms") {
  SECTION("t=0 is the identity") {
    const auto spec = random_instance(9, 2.0, 7);
    for (std::size_t j = 1; j <= 9; ++j)
      for (std::size_t k = 1; k <= 9; ++k) {
        const auto amp = propagator(spec, j, k, 0.0);
        REQUIRE(amp.imag() == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(amp.real() == Catch::Approx(j == k ? 1.0 : 0.0).margin(1e-12));
      }
  }
  SECTION("n=1 pure phase") {
    OneBodyOperator op{{0.8}, {}};
    const auto spec = diagonalize(op);
    const double t = 1.9;
    const auto amp = propagator(spec, 1, 1, t);
    REQUIRE(amp.real() == Catch::Approx(std::cos(2.0 * t * 0.8)).margin(1e-12));
    REQUIRE(amp.imag() == Catch::Approx(-std::sin(2.0 * t * 0.8)).margin(1e-12));
  }
  SECTION("n=2 free: cos/sin family") {
    const auto spec = diagonalize(free_chain(2));
    for (double t : {0.0, 0.3, 1.1, 2.7}) {
      const auto a11 = propagator(spec, 1, 1, t);
      const auto a12 = propagator(spec, 1, 2, t);
      REQUIRE(a11.real() == Catch::Approx(std::cos(2.0 * t)).margin(1e-12));
      REQUIRE(a11.imag() == Catch::Approx(0.0).margin(1e-12));
      REQUIRE(a12.real() == Catch::Approx(0.0).margin(1e-12));
      REQUIRE(a12.imag() == Catch::Approx(-std::sin(2.0 * t)).margin(1e-12));
    }
  }
  SECTION("out-of-range sites are rejected") {
    const auto spec = random_instance(4, 1.0, 3);
    REQUIRE_THROWS_AS(propagator(spec, 0, 1, 1.0), ArgumentError);
    REQUIRE_THROWS_AS(propagator(spec, 1, 5, 1.0), ArgumentError);
  }
}

TEST_CASE("propagator rows: unitarity and consistency") {
  const auto spec = random_instance(150, 2.0, 11);
  SECTION("t=0 gives a standard basis vector") {
    const auto row = propagator_row(spec, 7, 0.0);
    for (std::size_t k = 0; k < spec.n; ++k) {
      REQUIRE(std::abs(row[k] - (k == 6 ? 1.0 : 0.0)) < 1e-12);
    }
  }
  SECTION("rows are unit vectors and match per-element calls") {
    for (double t : {0.4, 3.0, 17.0}) {
      const auto row = propagator_row(spec, 3, t);
      double sum = 0.0;
      for (const auto& c : row) sum += std::norm(c);
      REQUIRE(sum == Catch::Approx(1.0).margin(1e-10));
      for (std::size_t k = 1; k <= spec.n; k += 37)
        REQUIRE(std::abs(row[k - 1] - propagator(spec, 3, k, t)) < 1e-12);
    }
  }
  SECTION("|amplitude| never exceeds 1") {
    for (double t : {0.9, 8.3}) {
      const auto row = propagator_row(spec, 1, t);
      for (const auto& c : row) REQUIRE(std::abs(c) <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("eigenfunction correlator") {
  SECTION("normalization at n=1 and on the diagonal") {
    OneBodyOperator op{{-0.4}, {}};
    REQUIRE(eigenfunction_correlator(diagonalize(op), 1, 1) == Catch::Approx(1.0).margin(1e-12));
    const auto spec = random_instance(31, 3.0, 13);
    for (std::size_t j = 1; j <= spec.n; j += 7)
      REQUIRE(eigenfunction_correlator(spec, j, j) == Catch::Approx(1.0).margin(1e-10));
  }
  SECTION("n=2 free gives Q(1,2) = 1") {
    const auto spec = diagonalize(free_chain(2));
    REQUIRE(eigenfunction_correlator(spec, 1, 2) == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("symmetry and the Cauchy-Schwarz cap") {
    const auto spec = random_instance(40, 2.0, 17);
    for (std::size_t j = 1; j <= 40; j += 11)
      for (std::size_t k = 1; k <= 40; k += 7) {
        const double q = eigenfunction_correlator(spec, j, k);
        REQUIRE(q == Catch::Approx(eigenfunction_correlator(spec, k, j)).margin(1e-14));
        REQUIRE(q <= 1.0 + 1e-10);
        REQUIRE(q >= 0.0);
      }
  }
  SECTION("Q dominates |propagator| on a 200-point time grid") {
    const auto spec = random_instance(24, 1.5, 19);
    for (std::size_t j : {1ul, 5ul})
      for (std::size_t k : {2ul, 12ul, 24ul}) {
        const double q = eigenfunction_correlator(spec, j, k);
        for (int i = 0; i < 200; ++i) {
          const double t = 100.0 * (i + 1) / 200.0;
          REQUIRE(std::abs(propagator(spec, j, k, t)) <= q + 1e-10);
        }
      }
  }
}
