#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "plr/errors.hpp"
#include "plr/spectral.hpp"

namespace plr {

// Diagonal product state: rho = (x) diag(eta_j, 1 - eta_j); eta_j is the
// occupation (up-spin probability) at site j.
struct ProductState {
  std::vector<double> eta;

  void validate(std::size_t n) const {
    if (eta.size() != n)
      throw ArgumentError("ProductState: eta length " + std::to_string(eta.size()) +
                          " does not match n = " + std::to_string(n));
    for (double e : eta)
      if (!(e >= 0.0 && e <= 1.0))
        throw ArgumentError("ProductState: eta entries must lie in [0,1]");
  }

  // all spins down on {1..wall}, up on the rest
  static ProductState domain_wall(std::size_t n, std::size_t wall) {
    ProductState s;
    s.eta.assign(n, 1.0);
    for (std::size_t j = 0; j < std::min(wall, n); ++j) s.eta[j] = 0.0;
    return s;
  }
};

// (time, value) samples of a dynamical observable.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;

  void validate() const {
    if (times.size() != values.size())
      throw ArgumentError("TimeSeries: times/values length mismatch");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
      if (!(times[i] < times[i + 1])) throw ArgumentError("TimeSeries: times must be ascending");
    for (double v : values)
      if (!std::isfinite(v)) throw ArgumentError("TimeSeries: values must be finite");
  }
};

// D(j,k,t) = sum_{m=k}^{n} |<delta_j, e^{-2itH} delta_m>|. For any B
// supported on sites {k..n} with ||B|| <= 1 and A in {a_j, a_j*}, the true
// commutator satisfies ||[tau_t(A), B]|| <= 8 D(j,k,t); products a_j* a_j
// double the constant through the Leibniz rule.
inline double commutator_upper(const SpectralDecomposition& spec, std::size_t j, std::size_t k,
                               double t) {
  detail::check_site(j, spec.n, "commutator_upper");
  detail::check_site(k, spec.n, "commutator_upper");
  const auto row = propagator_row(spec, j, t);
  double acc = 0.0;
  for (std::size_t m = k - 1; m < spec.n; ++m) acc += std::abs(row[m]);
  return acc;
}

// |<delta_1, e^{-2itH} delta_k>|: a certified lower bound on
// ||[tau_t(c_1), a_k*]||, the witness driving the PLR failure argument.
inline double commutator_lower_witness(const SpectralDecomposition& spec, std::size_t k,
                                       double t) {
  detail::check_site(k, spec.n, "commutator_lower_witness");
  return std::abs(propagator(spec, 1, k, t));
}

// p-th position moment of the site-1 wavepacket plus the boundary-mass
// diagnostic (weight beyond n/2, used to guard against edge reflection).
struct PositionMoment {
  double value = 0.0;
  double boundary_mass = 0.0;
};

inline PositionMoment position_moment(const SpectralDecomposition& spec, double p, double t) {
  if (!(p >= 0.0)) throw ArgumentError("position_moment: p must be >= 0");
  const auto row = propagator_row(spec, 1, t);
  PositionMoment out;
  const std::size_t half = spec.n / 2;
  for (std::size_t k = 0; k < spec.n; ++k) {
    const double w = std::norm(row[k]);
    out.value += std::pow(static_cast<double>(k + 1), p) * w;
    if (k + 1 > half) out.boundary_mass += w;
  }
  return out;
}

// Moment and boundary series over a time grid; one decomposition pass per
// time point.
struct MomentSeries {
  TimeSeries moments;
  std::vector<double> boundary;
};

inline MomentSeries moment_series(const SpectralDecomposition& spec, double p,
                                  const std::vector<double>& times) {
  MomentSeries out;
  out.moments.times = times;
  out.moments.values.reserve(times.size());
  out.boundary.reserve(times.size());
  for (double t : times) {
    const auto m = position_moment(spec, p, t);
    out.moments.values.push_back(m.value);
    out.boundary.push_back(m.boundary_mass);
  }
  out.moments.validate();
  return out;
}

// Abel time average (2/T) int_0^inf e^{-2t/T} |X|^p(t) dt, truncated at
// 10 T. The dropped tail is bounded by n^p e^{-20} and reported in the
// error bar together with the last quadrature refinement step.
struct AveragedMoment {
  double value = 0.0;
  double error_bar = 0.0;
};

namespace detail {

template <class Fn>
double abel_average_fixed(const Fn& observable, double T, std::size_t intervals) {
  const double upper = 10.0 * T;
  const double h = upper / static_cast<double>(intervals);
  auto f = [&](double t) { return (2.0 / T) * std::exp(-2.0 * t / T) * observable(t); };
  // composite Simpson, intervals even
  double acc = f(0.0) + f(upper);
  for (std::size_t i = 1; i < intervals; ++i)
    acc += f(h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace detail

// Generic Abel average over [0, 10T], refined until successive composite
// rules agree to 1e-6 relative; tail_bound covers the truncated mass and
// enters the error bar.
template <class Fn>
AveragedMoment abel_average(const Fn& observable, double T, double tail_bound) {
  if (!(T > 0.0)) throw ArgumentError("abel_average: T must be > 0");
  std::size_t intervals = 128;
  double cur = detail::abel_average_fixed(observable, T, intervals);
  double step_err;
  do {
    intervals *= 2;
    const double prev = cur;
    cur = detail::abel_average_fixed(observable, T, intervals);
    step_err = std::abs(cur - prev);
  } while (step_err > 1e-6 * std::abs(cur) && intervals < (1u << 16));
  return {cur, step_err + tail_bound};
}

inline AveragedMoment time_averaged_moment(const SpectralDecomposition& spec, double p,
                                           double T) {
  const double tail = std::pow(static_cast<double>(spec.n), p) * std::exp(-20.0);
  return abel_average([&](double t) { return position_moment(spec, p, t).value; }, T, tail);
}

// Finite-window transport-exponent estimator: least-squares slope of
// ln value against p ln t over [t_lo, t_hi]. boundary_at_t_hi is the
// boundary-mass diagnostic at the window end; the fit refuses when the
// front has reached the right edge.
struct BetaFit {
  double beta = 0.0;
  double std_error = 0.0;
  std::size_t points = 0;
};

inline BetaFit estimate_beta(const TimeSeries& series, double p, double t_lo, double t_hi,
                             double boundary_at_t_hi) {
  series.validate();
  if (!(p > 0.0)) throw ArgumentError("estimate_beta: p must be > 0");
  if (!(t_lo < t_hi)) throw ArgumentError("estimate_beta: empty window");
  if (!series.times.empty() &&
      (t_lo < series.times.front() - 1e-12 || t_hi > series.times.back() + 1e-12))
    throw ArgumentError("estimate_beta: window not contained in series times");
  if (boundary_at_t_hi >= 1e-6)
    throw BoundaryError("estimate_beta: boundary mass " + std::to_string(boundary_at_t_hi) +
                        " at window end exceeds 1e-6; increase n");

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < t_lo || t > t_hi) continue;
    if (!(series.values[i] > 0.0))
      throw ArgumentError("estimate_beta: nonpositive value at t = " + std::to_string(t));
    xs.push_back(p * std::log(t));
    ys.push_back(std::log(series.values[i]));
  }
  const std::size_t m = xs.size();
  if (m < 8)
    throw ArgumentError("estimate_beta: need at least 8 samples in window, got " +
                        std::to_string(m));

  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= static_cast<double>(m);
  ybar /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - ybar - slope * (xs[i] - xbar);
    ssr += r * r;
  }
  const double var = ssr / static_cast<double>(m - 2) / sxx;
  return {slope, std::sqrt(std::max(var, 0.0)), m};
}

// <N_S>_{rho_t} = sum_{j in S} sum_k |<delta_j, e^{-2itH} delta_k>|^2 eta_k.
// The modulus makes the sign of the time factor immaterial for real
// symmetric H.
inline double number_expectation(const SpectralDecomposition& spec, const ProductState& state,
                                 const std::vector<std::size_t>& sites, double t) {
  state.validate(spec.n);
  for (std::size_t j : sites) detail::check_site(j, spec.n, "number_expectation");
  double acc = 0.0;
  for (std::size_t j : sites) {
    const auto row = propagator_row(spec, j, t);
    for (std::size_t k = 0; k < spec.n; ++k) acc += std::norm(row[k]) * state.eta[k];
  }
  return acc;
}

// Time-independent cap on sup_t <N_S>: |amp(j,k,t)| <= Q(j,k) pointwise,
// and each site's arrival probability is at most 1.
inline double number_expectation_bound(const SpectralDecomposition& spec,
                                       const ProductState& state,
                                       const std::vector<std::size_t>& sites) {
  state.validate(spec.n);
  for (std::size_t j : sites) detail::check_site(j, spec.n, "number_expectation_bound");
  double acc = 0.0;
  for (std::size_t j : sites) {
    double site = 0.0;
    for (std::size_t k = 1; k <= spec.n; ++k) {
      const double q = eigenfunction_correlator(spec, j, k);
      site += q * q * state.eta[k - 1];
    }
    acc += std::min(1.0, site);
  }
  return acc;
}

// One sampled point of the lower-bound witness surface.
struct WitnessPoint {
  std::size_t k = 0;
  double t = 0.0;
  double value = 0.0;  // commutator_lower_witness(k, t)
};

// Witness samples on the canonical grid: t geometric with ratio sqrt(2)
// starting at 1, sites 2..n/2. The near-light-cone region k ~ 4t is always
// covered.
inline std::vector<WitnessPoint> witness_grid(const SpectralDecomposition& spec, double t_max) {
  if (!(t_max >= 1.0)) throw ArgumentError("witness_grid: t_max must be >= 1");
  if (spec.n < 4) throw ArgumentError("witness_grid: n too small");
  std::vector<double> ts;
  for (double t = 1.0; t <= t_max * (1.0 + 1e-12); t *= std::sqrt(2.0)) ts.push_back(t);
  std::vector<WitnessPoint> grid;
  grid.reserve(ts.size() * (spec.n / 2 - 1));
  for (double t : ts) {
    const auto row = propagator_row(spec, 1, t);
    for (std::size_t k = 2; k <= spec.n / 2; ++k)
      grid.push_back({k, t, std::abs(row[k - 1])});
  }
  return grid;
}

// W(a,b) = max over the grid of (k / t^a)^b * witness(k,t). Under a
// polynomial light-cone bound with parameters (a,b) and constant C this is
// <= C uniformly; growth under grid extension is evidence against the
// bound. Homogeneous of degree 1 in the witness values.
inline double plr_witness(const std::vector<WitnessPoint>& grid, double a, double b) {
  if (grid.empty()) throw ArgumentError("plr_witness: empty grid");
  if (!(a >= 0.0 && a <= 1.0)) throw ArgumentError("plr_witness: a must lie in [0,1]");
  if (!(b > 0.0)) throw ArgumentError("plr_witness: b must be > 0");
  double w = 0.0;
  for (const auto& pt : grid) {
    if (pt.k < 2 || !(pt.t >= 1.0))
      throw ArgumentError("plr_witness: grid requires k >= 2 and t >= 1");
    w = std::max(w, std::pow(static_cast<double>(pt.k) / std::pow(pt.t, a), b) * pt.value);
  }
  return w;
}

}  // namespace plr
