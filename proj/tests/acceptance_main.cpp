// Acceptance suite: one check per numbered criterion, each printing a
// single [PASS]/[FAIL] line. Run with no arguments for all criteria or
// with a criterion number to run one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "plr/plr.hpp"

using namespace plr;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, double seconds) {
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), seconds);
  std::fflush(stdout);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Oracle equivalence: dense many-body brute force vs every quasi-free
// formula on >= 25 random instances, n in 2..6, lambda in {0.5, 2, 6},
// t in {0, 0.3, 0.7, 1.3, 2.1}.
void criterion_1() {
  Timer timer;
  oracle::SuiteOptions opt;  // defaults match the stated grid: 30 instances
  const auto checks = oracle::run_suite(opt);
  bool pass = true;
  std::string detail;
  for (const auto& c : checks) {
    pass = pass && c.pass();
    if (!c.pass()) detail += " [" + c.name + " worst " + std::to_string(c.worst) + "]";
  }
  report(1, pass,
         "oracle equivalence (CAR<=1e-12, quadratic form<=1e-10, evolution<=1e-9, "
         "number<=1e-8, sandwich)" +
             detail,
         timer.elapsed());
}

// 2. Unitarity and normalization at n = 2000 over 50 random (t, realization)
// pairs, plus number conservation on full-chain site sets.
void criterion_2() {
  Timer timer;
  bool pass = true;
  DisorderConfig cfg{2000, 1.0, 0.5, {1.0}, 424242};
  SplitMix64 tgen(derive_seed(cfg.master_seed, 999));
  double worst_unit = 0.0, worst_p0 = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto spec = diagonalize(build_one_body(cfg, sample_potential(cfg, i)));
    const double t = 100.0 * tgen.next_unit();
    const auto row = propagator_row(spec, 1, t);
    double sum = 0.0;
    for (const auto& c : row) sum += std::norm(c);
    worst_unit = std::max(worst_unit, std::abs(sum - 1.0));
    worst_p0 = std::max(worst_p0, std::abs(position_moment(spec, 0.0, t).value - 1.0));
  }
  pass = pass && worst_unit <= 1e-10 && worst_p0 <= 1e-10;

  DisorderConfig small{400, 2.0, 0.5, {1.0}, 515151};
  double worst_cons = 0.0;
  std::vector<std::size_t> all;
  for (std::size_t j = 1; j <= small.n; ++j) all.push_back(j);
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto spec = diagonalize(build_one_body(small, sample_potential(small, i)));
    ProductState st;
    st.eta.resize(small.n);
    SplitMix64 egen(derive_seed(small.master_seed, 100 + i));
    double total = 0.0;
    for (auto& e : st.eta) {
      e = egen.next_unit();
      total += e;
    }
    const double t = 40.0 * egen.next_unit();
    worst_cons = std::max(worst_cons,
                          std::abs(number_expectation(spec, st, all, t) - total));
  }
  pass = pass && worst_cons <= 1e-10;

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "unitarity n=2000 (worst %.1e), p=0 moment (worst %.1e), number "
                "conservation (worst %.1e), all <= 1e-10",
                worst_unit, worst_p0, worst_cons);
  report(2, pass, buf, timer.elapsed());
}

// 3. Ballistic regime: n = 4096, lambda in {0, 1}, p = 2, window [20, 80],
// median beta over >= 20 realizations in [0.85, 1.1]; for lambda = 1 also
// beta >= 1 - lambda/(4p) - 0.15.
void criterion_3() {
  Timer timer;
  DisorderConfig base{4096, 1.0, 0.5, {1.0}, 12345};
  std::vector<double> times;
  for (double t = 1.0; t <= 100.0 * (1.0 + 1e-12); t *= std::pow(100.0, 1.0 / 47.0))
    times.push_back(t);
  bool pass = true;
  std::string detail;
  try {
    const auto rows = beta_vs_lambda(base, 20, 2.0, {0.0, 1.0}, times, 20.0, 80.0, 0);
    for (const auto& r : rows) {
      const bool in_range = r.beta_median >= 0.85 && r.beta_median <= 1.1;
      pass = pass && in_range;
      if (r.lambda == 1.0) pass = pass && r.beta_median >= 1.0 - 1.0 / 8.0 - 0.15;
      char buf[96];
      std::snprintf(buf, sizeof(buf), " lambda=%.0f median=%.3f (n=%zu)", r.lambda,
                    r.beta_median, r.samples);
      detail += buf;
    }
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string(" error: ") + e.what();
  }
  report(3, pass, "ballistic regime, median beta in [0.85, 1.1]" + detail, timer.elapsed());
}

namespace crit4 {

struct Fits {
  DecayFit fit3, fit6;
};

Fits localized_fits() {
  const auto ks = default_k_list(512);
  Fits out;
  for (double lambda : {3.0, 6.0}) {
    DisorderConfig cfg{512, lambda, 0.5, {1.0}, 777};  // same seeds for both lambdas
    const auto stats = correlator_decay(cfg, 200, 1, ks, 0);
    const auto fit = fit_decay(stats, ks, lambda);
    (lambda == 3.0 ? out.fit3 : out.fit6) = fit;
  }
  return out;
}

}  // namespace crit4

// 4. Localized regime: n = 512, 200 samples; decay slope strictly negative
// at >= 3 sigma for lambda = 6 and steeper than lambda = 3 at >= 2 sigma.
void criterion_4() {
  Timer timer;
  const auto fits = crit4::localized_fits();
  const bool negative = fits.fit6.slope + 3.0 * fits.fit6.slope_std_error < 0.0;
  const double diff = (-fits.fit6.slope) - (-fits.fit3.slope);
  const double sigma = std::sqrt(fits.fit6.slope_std_error * fits.fit6.slope_std_error +
                                 fits.fit3.slope_std_error * fits.fit3.slope_std_error);
  const bool monotone = diff >= 2.0 * sigma;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "localized regime: slope(6)=%.3f+-%.3f negative@3sigma=%d, "
                "steeper than slope(3)=%.3f by %.1f sigma",
                fits.fit6.slope, fits.fit6.slope_std_error, negative ? 1 : 0, fits.fit3.slope,
                sigma > 0 ? diff / sigma : 0.0);
  report(4, negative && monotone, buf, timer.elapsed());
}

// 5. PLR witness growth at (a, b) = (0.5, 2): nested grids t <= 25 vs
// t <= 50 grow by >= 1.5x at lambda = 1 and stay within 1.1x at lambda = 8.
void criterion_5() {
  Timer timer;
  auto median_ratio = [](double lambda) {
    DisorderConfig cfg{512, lambda, 0.5, {1.0}, 2};
    std::vector<double> w25s, w50s;
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      const auto spec = diagonalize(build_one_body(cfg, sample_potential(cfg, rep)));
      const auto grid50 = witness_grid(spec, 50.0);
      std::vector<WitnessPoint> grid25;
      for (const auto& pt : grid50)
        if (pt.t <= 25.0 * (1.0 + 1e-12)) grid25.push_back(pt);
      w25s.push_back(plr_witness(grid25, 0.5, 2.0));
      w50s.push_back(plr_witness(grid50, 0.5, 2.0));
    }
    std::sort(w25s.begin(), w25s.end());
    std::sort(w50s.begin(), w50s.end());
    return w50s[2] / w25s[2];
  };
  const double grow = median_ratio(1.0);
  const double flat = median_ratio(8.0);
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "witness growth: lambda=1 ratio %.3f (>= 1.5), lambda=8 ratio %.3f (<= 1.1)",
                grow, flat);
  report(5, grow >= 1.5 && flat <= 1.1, buf, timer.elapsed());
}

// 6. Kappa consistency: the lambda = 6 fit is reported with its one-sided
// caveat, and the estimator recovers planted exponents to 1e-12.
void criterion_6() {
  Timer timer;
  bool pass = true;

  const std::vector<std::size_t> ks{8, 11, 16, 23, 32, 45};
  std::vector<EnsembleStats> synth;
  for (std::size_t k : ks)
    synth.push_back({std::pow(static_cast<double>(k), -2.0), 0.0, 1, "synth"});
  const auto sfit = fit_decay(synth, ks, 2.0);
  pass = pass && std::abs(sfit.slope + 2.0) <= 1e-12;
  pass = pass && std::abs(sfit.kappa_estimate - 0.5625) <= 1e-12;
  const auto srep = kappa_consistency(sfit);
  pass = pass && !srep.consistent;  // planted 0.5625 exceeds the 5/16 ceiling

  const auto fits = crit4::localized_fits();
  const auto rep = kappa_consistency(fits.fit6);
  pass = pass && !rep.caveat.empty();
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "kappa: synthetic recovery exact to 1e-12; lambda=6 estimate %.4f+-%.4f "
                "vs ceiling 0.3125 (consistent=%d; one-sided caveat attached)",
                rep.kappa_estimate, rep.kappa_std_error, rep.consistent ? 1 : 0);
  report(6, pass, buf, timer.elapsed());
}

// 7. Determinism: identical config with different worker counts produces
// bitwise-identical CSV.
void criterion_7() {
  Timer timer;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "plr_acceptance_det";
  fs::remove_all(dir);

  json cfg{{"experiment", "transport"}, {"n", 256},        {"lambda", 1.5},
           {"samples", 6},              {"master_seed", 31415}, {"t_min", 1.0},
           {"t_max", 20.0},             {"t_points", 24},  {"window_lo", 2.0},
           {"window_hi", 16.0}};
  const auto spec = resolve_spec(cfg);
  const auto res1 = run(spec, (dir / "w1").string(), 1);
  const auto res5 = run(spec, (dir / "w5").string(), 5);
  const bool same_transport = read_bytes(res1.csv_path) == read_bytes(res5.csv_path);

  json cfg2{{"experiment", "correlator"}, {"n", 128}, {"lambda", 4.0}, {"samples", 10},
            {"master_seed", 7}};
  const auto spec2 = resolve_spec(cfg2);
  const auto r1 = run(spec2, (dir / "c1").string(), 1);
  const auto r4 = run(spec2, (dir / "c4").string(), 4);
  const bool same_corr = read_bytes(r1.csv_path) == read_bytes(r4.csv_path);

  report(7, same_transport && same_corr,
         "determinism: CSV bytes identical across --threads {1,5} and {1,4}",
         timer.elapsed());
}

// 8. Closed-form regression anchors at 1e-12.
void criterion_8() {
  Timer timer;
  double worst = 0.0;
  auto track = [&](double err) { worst = std::max(worst, err); };

  const auto spec2 = diagonalize(free_chain(2));
  for (double t : {0.0, 0.3, 0.7, 1.3, 2.1}) {
    const double c = std::cos(2.0 * t), s = std::sin(2.0 * t);
    track(std::abs(propagator(spec2, 1, 1, t) - cplx(c, 0.0)));
    track(std::abs(propagator(spec2, 1, 2, t) - cplx(0.0, -s)));
    track(std::abs(commutator_upper(spec2, 1, 2, t) - std::abs(s)));
    track(std::abs(commutator_lower_witness(spec2, 2, t) - std::abs(s)));
    track(std::abs(position_moment(spec2, 1.0, t).value - (1.0 + s * s)));
    ProductState wall;
    wall.eta = {0.0, 1.0};
    track(std::abs(number_expectation(spec2, wall, {1}, t) - s * s));
  }
  track(std::abs(eigenfunction_correlator(spec2, 1, 2) - 1.0));

  const auto spec3 = diagonalize(free_chain(3));
  track(std::abs(spec3.eigenvalues[0] + std::sqrt(2.0)));
  track(std::abs(spec3.eigenvalues[1]));
  track(std::abs(spec3.eigenvalues[2] - std::sqrt(2.0)));

  char buf[96];
  std::snprintf(buf, sizeof(buf), "closed-form anchors, worst deviation %.2e <= 1e-12",
                worst);
  report(8, worst <= 1e-12, buf, timer.elapsed());
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  } else {
    selected = {1, 2, 3, 4, 5, 6, 7, 8};
  }
  for (int c : selected) {
    switch (c) {
      case 1: criterion_1(); break;
      case 2: criterion_2(); break;
      case 3: criterion_3(); break;
      case 4: criterion_4(); break;
      case 5: criterion_5(); break;
      case 6: criterion_6(); break;
      case 7: criterion_7(); break;
      case 8: criterion_8(); break;
      default:
        std::fprintf(stderr, "unknown criterion %d\n", c);
        return 2;
    }
  }
  return g_failures == 0 ? 0 : 1;
}
