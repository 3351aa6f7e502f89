#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "plr/ensemble.hpp"
#include "plr/experiment.hpp"
#include "plr/quasifree.hpp"
#include "plr/version.hpp"

namespace plr {

struct RunResult {
  std::string csv_path;
  std::string sidecar_path;
  std::size_t rows = 0;
  std::vector<std::string> summary;  // one line per output file
};

namespace rundetail {

// fixed round-trip formatting so CSV bytes depend only on values
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Csv {
  std::string text;
  std::size_t rows = 0;

  void header(const std::string& h) { text += h + "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      text += cells[i];
      text += (i + 1 < cells.size()) ? "," : "\n";
    }
    ++rows;
  }
};

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

inline EnsembleStats column_stats(const std::vector<std::vector<double>>& table, std::size_t c,
                                  const std::string& id) {
  std::vector<double> col(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) col[i] = table[i][c];
  return detail::reduce_stats(col, id);
}

}  // namespace rundetail

// Executes a resolved experiment and renders its CSV plus a summary object
// for the sidecar. Pure with respect to the spec and thread count: the CSV
// bytes depend only on the spec.
inline void execute(const ExperimentSpec& spec, std::size_t threads, rundetail::Csv& csv,
                    json& summary) {
  using rundetail::fmt;
  const std::size_t n = spec.disorder.n;

  switch (spec.experiment) {
    case Experiment::Correlator:
    case Experiment::KappaFit: {
      const auto stats =
          correlator_decay(spec.disorder, spec.samples, spec.j, spec.k_list, threads);
      DecayFit fit;
      const bool fitted = spec.experiment == Experiment::KappaFit;
      if (fitted) fit = fit_decay(stats, spec.k_list, spec.disorder.lambda);

      csv.header(fitted ? "k,mean_Q,stderr,samples,fit" : "k,mean_Q,stderr,samples");
      for (std::size_t i = 0; i < stats.size(); ++i) {
        std::vector<std::string> cells{std::to_string(spec.k_list[i]), fmt(stats[i].mean),
                                       fmt(stats[i].std_error), std::to_string(stats[i].samples)};
        if (fitted)
          cells.push_back(fmt(std::exp(fit.intercept + fit.slope *
                                                           std::log(static_cast<double>(
                                                               spec.k_list[i])))));
        csv.row(cells);
      }
      if (fitted) {
        const auto rep = kappa_consistency(fit);
        summary["fit"] = {{"slope", fit.slope},
                          {"slope_stderr", fit.slope_std_error},
                          {"intercept", fit.intercept},
                          {"k_min", fit.k_min},
                          {"k_max", fit.k_max}};
        summary["kappa"] = {{"estimate", rep.kappa_estimate},
                           {"stderr", rep.kappa_std_error},
                           {"ceiling", rep.ceiling},
                           {"consistent", rep.consistent},
                           {"caveat", rep.caveat}};
      }
      break;
    }

    case Experiment::Transport: {
      const auto times = spec.times();
      const std::size_t T = times.size();
      const auto table = ensemble_table(
          spec.disorder, spec.samples,
          [&](const Realization& r) {
            const auto series = moment_series(r.spectral, spec.p, times);
            const auto fit = estimate_beta(series.moments, spec.p, spec.window_lo,
                                           spec.window_hi, series.boundary.back());
            std::vector<double> row = series.moments.values;
            row.insert(row.end(), series.boundary.begin(), series.boundary.end());
            row.push_back(fit.beta);
            return row;
          },
          threads);

      csv.header("t,moment,stderr,boundary,samples");
      for (std::size_t i = 0; i < T; ++i) {
        const auto m = rundetail::column_stats(table, i, "moment");
        const auto b = rundetail::column_stats(table, T + i, "boundary");
        csv.row({fmt(times[i]), fmt(m.mean), fmt(m.std_error), fmt(b.mean),
                 std::to_string(m.samples)});
      }
      std::vector<double> betas(table.size());
      for (std::size_t i = 0; i < table.size(); ++i) betas[i] = table[i][2 * T];
      const auto bstats = detail::reduce_stats(betas, "beta");
      summary["beta"] = {{"median", rundetail::median_of(betas)},
                         {"mean", bstats.mean},
                         {"stderr", bstats.std_error},
                         {"p", spec.p},
                         {"window", {spec.window_lo, spec.window_hi}}};
      break;
    }

    case Experiment::BetaVsLambda: {
      const auto rows = beta_vs_lambda(spec.disorder, spec.samples, spec.p, spec.lambda_list,
                                       spec.times(), spec.window_lo, spec.window_hi, threads);
      csv.header("lambda,beta_median,beta_mean,beta_stderr,samples");
      json diag = json::array();
      for (const auto& r : rows) {
        csv.row({fmt(r.lambda), fmt(r.beta_median), fmt(r.beta_mean), fmt(r.beta_std_error),
                 std::to_string(r.samples)});
        diag.push_back({{"lambda", r.lambda}, {"max_boundary_mass", r.max_boundary_mass}});
      }
      summary["p"] = spec.p;
      summary["window"] = {spec.window_lo, spec.window_hi};
      summary["boundary_diagnostics"] = diag;
      break;
    }

    case Experiment::Plr: {
      const double t_top = spec.t_max_list.back();
      const auto table = ensemble_table(
          spec.disorder, spec.samples,
          [&](const Realization& r) {
            const auto grid = witness_grid(r.spectral, t_top);
            std::vector<double> w;
            w.reserve(spec.t_max_list.size());
            for (double tm : spec.t_max_list) {
              std::vector<WitnessPoint> sub;
              for (const auto& pt : grid)
                if (pt.t <= tm * (1.0 + 1e-12)) sub.push_back(pt);
              w.push_back(plr_witness(sub, spec.a, spec.b));
            }
            return w;
          },
          threads);

      csv.header("t_max,W_median,W_mean,W_stderr,samples");
      std::vector<double> medians;
      for (std::size_t i = 0; i < spec.t_max_list.size(); ++i) {
        std::vector<double> col(table.size());
        for (std::size_t r = 0; r < table.size(); ++r) col[r] = table[r][i];
        const auto st = detail::reduce_stats(col, "W");
        const double med = rundetail::median_of(col);
        medians.push_back(med);
        csv.row({fmt(spec.t_max_list[i]), fmt(med), fmt(st.mean), fmt(st.std_error),
                 std::to_string(st.samples)});
      }
      summary["a"] = spec.a;
      summary["b"] = spec.b;
      summary["growth_factor"] = medians.back() / medians.front();
      break;
    }

    case Experiment::Number: {
      const auto times = spec.times();
      const std::size_t T = times.size();
      ProductState state;
      if (!spec.eta_list.empty())
        state.eta = spec.eta_list;
      else
        state = ProductState::domain_wall(n, spec.eta_wall);

      const auto table = ensemble_table(
          spec.disorder, spec.samples,
          [&](const Realization& r) {
            std::vector<double> row;
            row.reserve(T + 1);
            for (double t : times)
              row.push_back(number_expectation(r.spectral, state, spec.s_list, t));
            row.push_back(number_expectation_bound(r.spectral, state, spec.s_list));
            return row;
          },
          threads);

      csv.header("t,N_S,bound");
      const auto bound = rundetail::column_stats(table, T, "bound");
      for (std::size_t i = 0; i < T; ++i) {
        const auto m = rundetail::column_stats(table, i, "N_S");
        csv.row({fmt(times[i]), fmt(m.mean), fmt(bound.mean)});
      }
      summary["sites"] = spec.s_list;
      summary["bound_mean"] = bound.mean;
      break;
    }
  }
}

// Runs the experiment, writes <out_dir>/<output_path> and its .json
// sidecar, and returns one summary line per file written.
inline RunResult run(const ExperimentSpec& spec, const std::string& out_dir,
                     std::size_t threads = 0) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();

  rundetail::Csv csv;
  json summary = json::object();
  execute(spec, threads, csv, summary);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::path dir(out_dir.empty() ? "." : out_dir);
  fs::create_directories(dir);
  const fs::path csv_path = dir / spec.output_path;
  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
  fs::path sidecar_path = csv_path;
  sidecar_path.replace_extension(".json");

  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + csv_path.string() + "'");
    out << csv.text;
  }

  json sidecar{{"schema_version", 1},
               {"tool", {{"name", kToolName}, {"version", kVersion}}},
               {"experiment", experiment_name(spec.experiment)},
               {"config", spec_to_json(spec)},
               {"disorder", disorder_to_json(spec.disorder)},
               {"summary", summary},
               {"outputs", json::array({{{"path", csv_path.filename().string()},
                                         {"rows", csv.rows}}})},
               {"timing", {{"wall_seconds", wall}}}};
  {
    std::ofstream out(sidecar_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + sidecar_path.string() + "'");
    out << sidecar.dump(2) << "\n";
  }

  RunResult res;
  res.csv_path = csv_path.string();
  res.sidecar_path = sidecar_path.string();
  res.rows = csv.rows;
  res.summary.push_back(res.csv_path + ": " + std::to_string(csv.rows) + " rows (" +
                        experiment_name(spec.experiment) + ")");
  res.summary.push_back(res.sidecar_path + ": provenance sidecar");
  return res;
}

}  // namespace plr
