#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "plr/disorder.hpp"
#include "plr/errors.hpp"
#include "plr/quasifree.hpp"
#include "plr/spectral.hpp"

namespace plr {

// Disorder-averaged statistics of one observable.
struct EnsembleStats {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::size_t samples = 0;
  std::string observable_id;
};

// One disorder realization, fully materialized.
struct Realization {
  std::size_t index = 0;
  std::vector<double> potential;
  OneBodyOperator op;
  SpectralDecomposition spectral;
};

namespace detail {

inline std::size_t resolve_threads(std::size_t threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, count) on a worker pool. Each index writes only
// its own slot, so results are independent of the schedule.
template <class Fn>
void parallel_for_index(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::min(resolve_threads(threads), std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

inline Realization make_realization(const DisorderConfig& config, std::size_t index) {
  Realization r;
  r.index = index;
  r.potential = sample_potential(config, index);
  r.op = build_one_body(config, r.potential);
  r.spectral = diagonalize(r.op);
  return r;
}

// Mean and stderr accumulated in index order: bitwise identical for any
// worker count.
inline EnsembleStats reduce_stats(const std::vector<double>& values, std::string id) {
  EnsembleStats s;
  s.samples = values.size();
  s.observable_id = std::move(id);
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double m2 = 0.0;
    for (double v : values) m2 += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(m2 / static_cast<double>(values.size() - 1));
    s.std_error = sd / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

}  // namespace detail

// Raw Monte Carlo table: row i holds the observable vector of realization
// i. Each slot is written by exactly one worker, so the table is identical
// for any worker count. A failing observable aborts the run with the
// lowest failing realization index in the message; BoundaryError keeps its
// type so callers can advise a larger n.
inline std::vector<std::vector<double>> ensemble_table(
    const DisorderConfig& config, std::size_t samples,
    const std::function<std::vector<double>(const Realization&)>& observable,
    std::size_t threads = 0) {
  if (samples < 1) throw ArgumentError("run_ensemble: samples must be >= 1");
  config.validate();
  std::vector<std::vector<double>> slots(samples);
  std::vector<std::exception_ptr> errors(samples);

  detail::parallel_for_index(samples, threads, [&](std::size_t i) {
    try {
      slots[i] = observable(detail::make_realization(config, i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });

  for (std::size_t i = 0; i < samples; ++i) {
    if (!errors[i]) continue;
    const std::string where = "realization " + std::to_string(i) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const BoundaryError& e) {
      throw BoundaryError(where + e.what());
    } catch (const std::exception& e) {
      throw ConfigError(where + e.what());
    }
  }
  return slots;
}

// Vector-valued Monte Carlo runner: statistics reduced per component in
// index order, independent of worker count.
inline std::vector<EnsembleStats> run_ensemble_multi(
    const DisorderConfig& config, std::size_t samples,
    const std::vector<std::string>& observable_ids,
    const std::function<std::vector<double>(const Realization&)>& observable,
    std::size_t threads = 0) {
  const std::size_t width = observable_ids.size();
  const auto slots = ensemble_table(
      config, samples,
      [&](const Realization& r) {
        auto v = observable(r);
        if (v.size() != width)
          throw ArgumentError("observable returned " + std::to_string(v.size()) +
                              " values, expected " + std::to_string(width));
        return v;
      },
      threads);

  std::vector<EnsembleStats> out;
  out.reserve(width);
  std::vector<double> column(samples);
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t i = 0; i < samples; ++i) column[i] = slots[i][c];
    out.push_back(detail::reduce_stats(column, observable_ids[c]));
  }
  return out;
}

inline EnsembleStats run_ensemble(const DisorderConfig& config, std::size_t samples,
                                  const std::string& observable_id,
                                  const std::function<double(const Realization&)>& observable,
                                  std::size_t threads = 0) {
  auto stats = run_ensemble_multi(
      config, samples, {observable_id},
      [&](const Realization& r) { return std::vector<double>{observable(r)}; }, threads);
  return stats.front();
}

// E[Q(j,k)] for each k in k_list, ready for log-log fitting.
inline std::vector<EnsembleStats> correlator_decay(const DisorderConfig& config,
                                                   std::size_t samples, std::size_t j,
                                                   const std::vector<std::size_t>& k_list,
                                                   std::size_t threads = 0) {
  if (k_list.empty()) throw ArgumentError("correlator_decay: empty k_list");
  for (std::size_t i = 0; i + 1 < k_list.size(); ++i)
    if (!(k_list[i] < k_list[i + 1]))
      throw ArgumentError("correlator_decay: k_list must be ascending");
  if (!(j < k_list.front()))
    throw ArgumentError("correlator_decay: require j < min(k_list), got j = " +
                        std::to_string(j));
  for (std::size_t k : k_list)
    if (k > config.n)
      throw ArgumentError("correlator_decay: site " + std::to_string(k) + " out of range");

  std::vector<std::string> ids;
  ids.reserve(k_list.size());
  for (std::size_t k : k_list)
    ids.push_back("Q(" + std::to_string(j) + "," + std::to_string(k) + ")");
  return run_ensemble_multi(
      config, samples, ids,
      [&](const Realization& r) {
        std::vector<double> q;
        q.reserve(k_list.size());
        for (std::size_t k : k_list) q.push_back(eigenfunction_correlator(r.spectral, j, k));
        return q;
      },
      threads);
}

// Weighted log-log fit of correlator decay. kappa_estimate inverts the
// k^(1/4 - kappa lambda^2) profile: kappa = (1/4 - slope) / lambda^2.
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  double kappa_estimate = 0.0;
  double kappa_std_error = 0.0;
};

inline DecayFit fit_decay(const std::vector<EnsembleStats>& stats,
                          const std::vector<std::size_t>& k_list, double lambda) {
  if (stats.size() != k_list.size())
    throw ArgumentError("fit_decay: stats/k_list length mismatch");
  if (stats.size() < 6) throw ArgumentError("fit_decay: need at least 6 points");
  if (k_list.front() < 2) throw ArgumentError("fit_decay: k_min must be >= 2");
  if (!(lambda > 0.0)) throw ArgumentError("fit_decay: lambda must be > 0");

  const std::size_t m = stats.size();
  std::vector<double> x(m), y(m), w(m);
  double min_var = std::numeric_limits<double>::infinity();
  bool have_errors = false;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(stats[i].mean > 0.0))
      throw ArgumentError("fit_decay: nonpositive mean at k = " + std::to_string(k_list[i]));
    x[i] = std::log(static_cast<double>(k_list[i]));
    y[i] = std::log(stats[i].mean);
    // delta method: var(log mean) = (stderr / mean)^2
    const double rel = stats[i].std_error / stats[i].mean;
    w[i] = rel * rel;
    if (w[i] > 0.0) {
      min_var = std::min(min_var, w[i]);
      have_errors = true;
    }
  }
  const double floor_var = have_errors ? min_var * 1e-6 : 1.0;
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    w[i] = 1.0 / std::max(w[i], floor_var);
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double xbar = swx / sw, ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }

  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  if (have_errors) {
    // known-variance weighted least squares
    fit.slope_std_error = std::sqrt(1.0 / sxx);
  } else {
    // exact inputs: residual-based estimate (zero for a pure power law)
    double ssr = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ssr += r * r;
    }
    fit.slope_std_error = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  }
  fit.k_min = k_list.front();
  fit.k_max = k_list.back();
  fit.kappa_estimate = (0.25 - fit.slope) / (lambda * lambda);
  fit.kappa_std_error = fit.slope_std_error / (lambda * lambda);
  return fit;
}

// Default geometric grid for correlator fits: ratio sqrt(2) from 8 to n/2.
inline std::vector<std::size_t> default_k_list(std::size_t n) {
  std::vector<std::size_t> ks;
  for (double k = 8.0; k <= static_cast<double>(n) / 2.0 + 1e-9; k *= std::sqrt(2.0)) {
    const auto ki = static_cast<std::size_t>(std::llround(k));
    if (ks.empty() || ki > ks.back()) ks.push_back(ki);
  }
  return ks;
}

// One row of the transport-exponent scan.
struct BetaLambdaRow {
  double lambda = 0.0;
  double beta_median = 0.0;
  double beta_mean = 0.0;
  double beta_std_error = 0.0;
  std::size_t samples = 0;
  double max_boundary_mass = 0.0;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace detail

// Per-lambda ensemble of finite-window transport exponents. The median is
// the headline aggregate (log-log slopes have heavy tails at finite n);
// the mean is reported alongside. lambda = 0 rows run the deterministic
// free chain as a single realization.
inline std::vector<BetaLambdaRow> beta_vs_lambda(const DisorderConfig& base,
                                                 std::size_t samples, double p,
                                                 const std::vector<double>& lambda_list,
                                                 const std::vector<double>& times, double t_lo,
                                                 double t_hi, std::size_t threads = 0) {
  if (lambda_list.empty()) throw ArgumentError("beta_vs_lambda: empty lambda_list");
  if (!(p > 0.0)) throw ArgumentError("beta_vs_lambda: p must be > 0");

  std::vector<BetaLambdaRow> rows;
  rows.reserve(lambda_list.size());
  for (double lambda : lambda_list) {
    if (lambda < 0.0) throw ArgumentError("beta_vs_lambda: lambda must be >= 0");
    std::vector<double> betas;
    double max_boundary = 0.0;

    auto fit_one = [&](const SpectralDecomposition& spec) {
      const auto series = moment_series(spec, p, times);
      const double boundary = series.boundary.back();
      const auto fit =
          estimate_beta(series.moments, p, t_lo, t_hi, boundary);
      return std::pair<double, double>(fit.beta, boundary);
    };

    if (lambda == 0.0) {
      const auto spec = diagonalize(free_chain(base.n));
      const auto [beta, boundary] = fit_one(spec);
      betas.push_back(beta);
      max_boundary = boundary;
    } else {
      DisorderConfig config = base;
      config.lambda = lambda;
      std::vector<std::vector<double>> raw(samples);
      std::vector<std::exception_ptr> errors(samples);
      detail::parallel_for_index(samples, threads, [&](std::size_t i) {
        try {
          const Realization r = detail::make_realization(config, i);
          const auto [beta, boundary] = fit_one(r.spectral);
          raw[i] = {beta, boundary};
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
      for (std::size_t i = 0; i < samples; ++i) {
        if (!errors[i]) continue;
        try {
          std::rethrow_exception(errors[i]);
        } catch (const BoundaryError& e) {
          throw BoundaryError("lambda = " + std::to_string(lambda) + ", realization " +
                              std::to_string(i) + ": " + e.what());
        } catch (const std::exception& e) {
          throw ConfigError("lambda = " + std::to_string(lambda) + ", realization " +
                            std::to_string(i) + " failed: " + e.what());
        }
      }
      for (std::size_t i = 0; i < samples; ++i) {
        betas.push_back(raw[i][0]);
        max_boundary = std::max(max_boundary, raw[i][1]);
      }
    }

    const auto stats = detail::reduce_stats(betas, "beta");
    rows.push_back({lambda, detail::median(betas), stats.mean, stats.std_error, betas.size(),
                    max_boundary});
  }
  return rows;
}

// Consistency report for the fitted decay coefficient against the 5/16
// ceiling. The comparison is one-sided by construction and the report says
// so: the fitted exponent tracks the observed decay of the averaged
// correlator, which may be faster than the guaranteed bound, so
// kappa_estimate can exceed the coefficient appearing in the bound.
struct KappaReport {
  double kappa_estimate = 0.0;
  double kappa_std_error = 0.0;
  double ceiling = 5.0 / 16.0;
  bool consistent = false;
  std::string caveat;
};

inline KappaReport kappa_consistency(const DecayFit& fit) {
  KappaReport rep;
  rep.kappa_estimate = fit.kappa_estimate;
  rep.kappa_std_error = fit.kappa_std_error;
  rep.consistent = fit.kappa_estimate <= rep.ceiling + 3.0 * fit.kappa_std_error;
  rep.caveat =
      "one-sided check: the fit measures the observed decay of the averaged "
      "correlator, which can be faster than the guaranteed envelope, so "
      "kappa_estimate may overestimate the envelope coefficient";
  return rep;
}

}  // namespace plr
