#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "plr/errors.hpp"
#include "plr/rng.hpp"

namespace plr {

// Single-site law of the random field: uniform on [-halfwidth, halfwidth].
// Zero mean, bounded density, compact support.
struct UniformSymmetric {
  double halfwidth = 1.0;
};

// Full description of the random model: chain length n, coupling lambda,
// envelope exponent alpha (field decays like j^-alpha), single-site law,
// and the master seed every stream derives from.
struct DisorderConfig {
  std::size_t n = 0;
  double lambda = 0.0;
  double envelope_exponent = 0.5;
  UniformSymmetric distribution{};
  std::uint64_t master_seed = 1;

  void validate() const {
    if (n < 1) throw ConfigError("disorder: n must be >= 1, got " + std::to_string(n));
    if (!(lambda > 0.0))
      throw ConfigError("disorder: lambda must be > 0, got " + std::to_string(lambda));
    if (!(distribution.halfwidth > 0.0))
      throw ConfigError("disorder: halfwidth must be > 0, got " +
                        std::to_string(distribution.halfwidth));
    if (!std::isfinite(envelope_exponent))
      throw ConfigError("disorder: envelope_exponent must be finite");
  }
};

// Symmetric tridiagonal one-body operator: diagonal holds the enveloped
// random field, all hopping entries equal 1.
struct OneBodyOperator {
  std::vector<double> diag;     // lambda * V_j / j^alpha, 1-based j
  std::vector<double> offdiag;  // n-1 ones

  std::size_t size() const { return diag.size(); }

  double max_abs_diag() const {
    double m = 0.0;
    for (double v : diag) m = std::max(m, std::abs(v));
    return m;
  }

  // Gershgorin bound on the spectral radius
  double norm_bound() const { return 2.0 + max_abs_diag(); }
};

// Draws (V_1, ..., V_n) i.i.d. from the configured law. The stream seed is
// derive_seed(master_seed, realization_index), so identical inputs give
// bitwise-identical output regardless of caller threading.
inline std::vector<double> sample_potential(const DisorderConfig& config,
                                            std::uint64_t realization_index) {
  SplitMix64 gen(derive_seed(config.master_seed, realization_index));
  std::vector<double> v(config.n);
  for (auto& x : v) x = gen.next_symmetric(config.distribution.halfwidth);
  return v;
}

// diag[j] = lambda * V_j / j^alpha (1-based). Tolerates lambda = 0 so the
// free chain can be constructed for testing; DisorderConfig::validate is
// the place that rejects it.
inline OneBodyOperator build_one_body(const DisorderConfig& config,
                                      const std::vector<double>& potential) {
  if (potential.size() != config.n)
    throw ConfigError("build_one_body: potential length " + std::to_string(potential.size()) +
                      " does not match n = " + std::to_string(config.n));
  OneBodyOperator op;
  op.diag.resize(config.n);
  for (std::size_t j = 0; j < config.n; ++j)
    op.diag[j] = config.lambda * potential[j] /
                 std::pow(static_cast<double>(j + 1), config.envelope_exponent);
  op.offdiag.assign(config.n > 0 ? config.n - 1 : 0, 1.0);
  return op;
}

// Free chain of length n: zero field, unit hopping.
inline OneBodyOperator free_chain(std::size_t n) {
  OneBodyOperator op;
  op.diag.assign(n, 0.0);
  op.offdiag.assign(n > 0 ? n - 1 : 0, 1.0);
  return op;
}

}  // namespace plr
