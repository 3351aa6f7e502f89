#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "plr/disorder.hpp"
#include "plr/oracle.hpp"
#include "plr/quasifree.hpp"
#include "plr/spectral.hpp"

// Cross-validation battery: every quasi-free formula checked against the
// dense many-body simulator on a grid of small random instances. Shared by
// the CLI `oracle-suite` subcommand and the acceptance suite.
namespace plr::oracle {

struct SuiteCheck {
  std::string name;
  double worst = 0.0;      // largest observed residual / violation
  double tolerance = 0.0;  // pass when worst <= tolerance
  bool pass() const { return worst <= tolerance; }
};

struct SuiteOptions {
  std::vector<std::size_t> sizes{2, 3, 4, 5, 6};
  std::vector<double> lambdas{0.5, 2.0, 6.0};
  std::vector<double> times{0.0, 0.3, 0.7, 1.3, 2.1};
  std::size_t realizations_per_case = 2;
  std::uint64_t master_seed = 20240515;
};

inline std::vector<SuiteCheck> run_suite(const SuiteOptions& opt = {}) {
  SuiteCheck car{"CAR anticommutators", 0.0, 1e-12};
  SuiteCheck quad{"spin form equals fermion quadratic form", 0.0, 1e-10};
  SuiteCheck prop{"Heisenberg evolution of c_j matches propagator", 0.0, 1e-9};
  SuiteCheck num{"number expectation quasifree vs exact", 0.0, 1e-8};
  SuiteCheck sand_lo{"witness below exact commutator norm", 0.0, 1e-9};
  SuiteCheck sand_hi{"exact commutator norm below 8D", 0.0, 1e-9};
  SuiteCheck leib{"product observable below 16D", 0.0, 1e-9};
  SuiteCheck norm_pres{"evolution preserves operator norm", 0.0, 1e-10};
  SuiteCheck small_t{"small-time commutator growth is linear", 0.0, 1e-9};

  auto entrywise_max = [](const CMatrix& M) {
    double m = 0.0;
    for (std::size_t i = 0; i < M.dim(); ++i)
      for (std::size_t j = 0; j < M.dim(); ++j) m = std::max(m, std::abs(M(i, j)));
    return m;
  };

  std::size_t instances = 0;
  for (std::size_t n : opt.sizes) {
    const std::size_t dim = std::size_t{1} << n;

    // CAR is disorder-independent; check once per size
    std::vector<CMatrix> c(n), cd(n), ad(n);
    for (std::size_t j = 1; j <= n; ++j) {
      c[j - 1] = build_site_operator(SiteOp::C, j, n);
      cd[j - 1] = build_site_operator(SiteOp::Cdag, j, n);
      ad[j - 1] = build_site_operator(SiteOp::Raise, j, n);
    }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        CMatrix anti = c[j] * cd[k] + cd[k] * c[j];
        if (j == k) anti -= CMatrix::identity(dim);
        car.worst = std::max(car.worst, entrywise_max(anti));
        car.worst = std::max(car.worst, entrywise_max(c[j] * c[k] + c[k] * c[j]));
      }

    for (double lambda : opt.lambdas) {
      for (std::size_t rep = 0; rep < opt.realizations_per_case; ++rep) {
        ++instances;
        DisorderConfig cfg{n, lambda, 0.5, {1.0}, opt.master_seed + 1000 * n + rep};
        const auto V = sample_potential(cfg, rep);
        const auto one_body = build_one_body(cfg, V);
        const auto spec = diagonalize(one_body);
        const CMatrix Hxy = build_xy_hamiltonian(cfg, V);

        quad.worst =
            std::max(quad.worst, entrywise_max(Hxy - fermion_quadratic_form(one_body)));

        const auto eig = hermitian_eigensystem(Hxy);
        auto evolve = [&](const CMatrix& A, double t) {
          const CMatrix U = detail::evolution_operator(eig, -t);
          return U * A * U.adjoint();
        };

        SplitMix64 gen(derive_seed(cfg.master_seed, 77 + rep));
        ProductState state;
        state.eta.resize(n);
        for (auto& e : state.eta) e = gen.next_unit();
        std::vector<std::size_t> S;
        for (std::size_t j = 1; j <= n; ++j)
          if (gen.next_unit() < 0.5) S.push_back(j);
        if (S.empty()) S.push_back(1);

        for (double t : opt.times) {
          for (std::size_t j = 1; j <= n; ++j) {
            const CMatrix tau = evolve(c[j - 1], t);
            const auto row = propagator_row(spec, j, t);
            CMatrix rhs(dim);
            for (std::size_t m = 1; m <= n; ++m) {
              CMatrix cm = c[m - 1];
              cm *= row[m - 1];
              rhs += cm;
            }
            prop.worst = std::max(prop.worst, entrywise_max(tau - rhs));
          }

          norm_pres.worst =
              std::max(norm_pres.worst,
                       std::abs(operator_norm(evolve(c[0], t)) - operator_norm(c[0])));

          num.worst = std::max(num.worst, std::abs(number_expectation(spec, state, S, t) -
                                                   exact_number_expectation(Hxy, state, S, t)));

          const CMatrix tau_c1 = evolve(c[0], t);
          const CMatrix tau_n1 = evolve(cd[0] * c[0], t);
          if (t == opt.times.front()) {
            // ||[tau_t(a_1), B]|| <= 2t ||[H_local, a_1]|| <= (8 + 4|V~_1|) t
            const double rate = 8.0 + 4.0 * std::abs(one_body.diag[0]);
            for (double ts : {1e-3, 3e-3, 1e-2}) {
              const double ex = operator_norm(commutator(evolve(c[0], ts), ad[1]));
              small_t.worst = std::max(small_t.worst, ex - rate * ts);
            }
          }
          for (std::size_t k = 2; k <= n; ++k) {
            // B = a_k* is supported on {k..n}; the JW c_k* is not
            const double exact = operator_norm(commutator(tau_c1, ad[k - 1]));
            const double wit = commutator_lower_witness(spec, k, t);
            const double D = commutator_upper(spec, 1, k, t);
            sand_lo.worst = std::max(sand_lo.worst, wit - exact);
            sand_hi.worst = std::max(sand_hi.worst, exact - 8.0 * D);
            leib.worst = std::max(
                leib.worst, operator_norm(commutator(tau_n1, ad[k - 1])) - 16.0 * D);
          }
        }
      }
    }
  }

  (void)instances;
  return {car, quad, prop, num, sand_lo, sand_hi, leib, norm_pres, small_t};
}

}  // namespace plr::oracle
