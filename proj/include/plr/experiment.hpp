#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "plr/disorder.hpp"
#include "plr/ensemble.hpp"
#include "plr/errors.hpp"

namespace plr {

using json = nlohmann::json;

enum class Experiment { Correlator, Transport, Plr, Number, KappaFit, BetaVsLambda };

inline const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Correlator: return "correlator";
    case Experiment::Transport: return "transport";
    case Experiment::Plr: return "plr";
    case Experiment::Number: return "number";
    case Experiment::KappaFit: return "kappa-fit";
    case Experiment::BetaVsLambda: return "beta-vs-lambda";
  }
  return "?";
}

inline Experiment experiment_from_name(const std::string& s) {
  for (Experiment e : {Experiment::Correlator, Experiment::Transport, Experiment::Plr,
                       Experiment::Number, Experiment::KappaFit, Experiment::BetaVsLambda})
    if (s == experiment_name(e)) return e;
  throw ConfigError("unknown experiment '" + s + "'");
}

// Fully resolved experiment description. Only the fields relevant to the
// chosen experiment are meaningful; resolve() fills defaults and validates
// the rest.
struct ExperimentSpec {
  Experiment experiment = Experiment::Correlator;
  DisorderConfig disorder;
  std::size_t samples = 100;
  std::string output_path;  // CSV file name, defaults to "<experiment>.csv"

  std::size_t j = 1;
  std::vector<std::size_t> k_list;

  double p = 2.0;
  double t_min = 1.0;
  double t_max = 100.0;
  std::size_t t_points = 48;
  std::string t_grid = "log";
  double window_lo = 20.0;
  double window_hi = 80.0;

  std::vector<double> lambda_list;

  double a = 0.5;
  double b = 2.0;
  std::vector<double> t_max_list{25.0, 50.0};

  std::size_t eta_wall = 0;           // domain wall position (0 = use eta_list)
  std::vector<double> eta_list;       // explicit occupations (empty = domain wall)
  std::vector<std::size_t> s_list;    // observed site set

  std::vector<double> times() const {
    std::vector<double> ts(t_points);
    if (t_grid == "log") {
      const double r = std::pow(t_max / t_min, 1.0 / static_cast<double>(t_points - 1));
      double t = t_min;
      for (auto& v : ts) {
        v = t;
        t *= r;
      }
      ts.back() = t_max;
    } else {
      const double h = (t_max - t_min) / static_cast<double>(t_points - 1);
      for (std::size_t i = 0; i < t_points; ++i) ts[i] = t_min + h * static_cast<double>(i);
    }
    return ts;
  }
};

namespace cfgdetail {

// ---- flat key-value parser (TOML-like subset) -------------------------

inline std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline json parse_scalar(const std::string& tok, std::size_t line_no) {
  if (tok.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value");
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"')
      throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
    return tok.substr(1, tok.size() - 2);
  }
  if (tok == "true") return true;
  if (tok == "false") return false;
  const bool integral =
      tok.find_first_not_of("0123456789", tok[0] == '-' || tok[0] == '+' ? 1 : 0) ==
      std::string::npos;
  try {
    if (integral) {
      if (tok[0] == '-') return static_cast<std::int64_t>(std::stoll(tok));
      return static_cast<std::uint64_t>(std::stoull(tok));
    }
    std::size_t used = 0;
    const double d = std::stod(tok, &used);
    if (used == tok.size()) return d;
  } catch (const std::exception&) {
    // fall through to bare-word handling
  }
  // bare word (e.g. experiment = correlator, t_grid = log)
  for (char ch : tok)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.'))
      throw ConfigError("line " + std::to_string(line_no) + ": cannot parse value '" + tok +
                        "'");
  return tok;
}

inline json parse_value(const std::string& tok, std::size_t line_no) {
  if (!tok.empty() && tok.front() == '[') {
    if (tok.back() != ']')
      throw ConfigError("line " + std::to_string(line_no) + ": unterminated array");
    json arr = json::array();
    std::string inner = tok.substr(1, tok.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = strip(item);
      if (item.empty()) continue;
      arr.push_back(parse_scalar(item, line_no));
    }
    return arr;
  }
  return parse_scalar(tok, line_no);
}

inline json parse_key_value_text(std::istream& in) {
  json out = json::object();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments (respecting quoted strings)
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = strip(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" +
                        line + "'");
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": missing key");
    if (out.contains(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    out[key] = parse_value(val, line_no);
  }
  return out;
}

// ---- typed getters with key-aware messages ----------------------------

inline double get_real(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
  return v.get<double>();
}

inline std::uint64_t get_uint(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError("key '" + key + "' must be a nonnegative integer");
}

inline std::string get_string(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError("key '" + key + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<double> get_real_list(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError("key '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& item : v) {
    if (!item.is_number()) throw ConfigError("key '" + key + "' must contain numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

inline std::vector<std::size_t> get_uint_list(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError("key '" + key + "' must be an array");
  std::vector<std::size_t> out;
  for (const auto& item : v) {
    if (item.is_number_unsigned())
      out.push_back(item.get<std::uint64_t>());
    else if (item.is_number_integer() && item.get<std::int64_t>() >= 0)
      out.push_back(static_cast<std::size_t>(item.get<std::int64_t>()));
    else
      throw ConfigError("key '" + key + "' must contain nonnegative integers");
  }
  return out;
}

inline const std::set<std::string>& allowed_keys(Experiment e) {
  static const std::set<std::string> common{"experiment", "n",           "lambda",
                                            "halfwidth",  "envelope_exponent",
                                            "master_seed", "samples",    "output_path"};
  static const std::set<std::string> time_keys{"t_min", "t_max", "t_points", "t_grid"};
  auto build = [&](std::initializer_list<std::string> extra) {
    std::set<std::string> s = common;
    for (const auto& k : extra) s.insert(k);
    return s;
  };
  static const std::set<std::string> correlator = build({"j", "k_list"});
  static const std::set<std::string> transport = [&] {
    auto s = build({"p", "window_lo", "window_hi"});
    s.insert(time_keys.begin(), time_keys.end());
    return s;
  }();
  static const std::set<std::string> plr = build({"a", "b", "t_max_list"});
  static const std::set<std::string> number = [&] {
    auto s = build({"eta_wall", "eta_list", "s_max", "s_list"});
    s.insert(time_keys.begin(), time_keys.end());
    return s;
  }();
  static const std::set<std::string> beta = [&] {
    auto s = build({"p", "lambda_list", "window_lo", "window_hi"});
    s.insert(time_keys.begin(), time_keys.end());
    return s;
  }();
  switch (e) {
    case Experiment::Correlator:
    case Experiment::KappaFit: return correlator;
    case Experiment::Transport: return transport;
    case Experiment::Plr: return plr;
    case Experiment::Number: return number;
    case Experiment::BetaVsLambda: return beta;
  }
  return common;
}

}  // namespace cfgdetail

// Resolves a raw config object (flat keys) into a validated spec. The
// experiment may come from the file or from the CLI subcommand; when both
// are present they must agree.
inline ExperimentSpec resolve_spec(json cfg, const std::string& experiment_override = "") {
  using namespace cfgdetail;
  if (cfg.contains("config")) cfg = cfg.at("config");  // sidecar re-feed
  if (!cfg.is_object()) throw ConfigError("config root must be an object");

  ExperimentSpec spec;
  std::string exp_name = experiment_override;
  if (cfg.contains("experiment")) {
    const std::string from_file = get_string(cfg, "experiment");
    if (!exp_name.empty() && from_file != exp_name)
      throw ConfigError("config declares experiment '" + from_file +
                        "' but the subcommand is '" + exp_name + "'");
    exp_name = from_file;
  }
  if (exp_name.empty()) throw ConfigError("missing required key 'experiment'");
  spec.experiment = experiment_from_name(exp_name);

  for (const auto& [key, _] : cfg.items())
    if (!allowed_keys(spec.experiment).count(key))
      throw ConfigError("unknown key '" + key + "' for experiment '" + exp_name + "'");

  if (!cfg.contains("n")) throw ConfigError("missing required key 'n'");
  spec.disorder.n = get_uint(cfg, "n");
  const bool lambda_required = spec.experiment != Experiment::BetaVsLambda;
  if (!cfg.contains("lambda") && lambda_required)
    throw ConfigError("missing required key 'lambda'");
  spec.disorder.lambda = cfg.contains("lambda") ? get_real(cfg, "lambda") : 1.0;
  if (cfg.contains("halfwidth")) spec.disorder.distribution.halfwidth = get_real(cfg, "halfwidth");
  if (cfg.contains("envelope_exponent"))
    spec.disorder.envelope_exponent = get_real(cfg, "envelope_exponent");
  if (cfg.contains("master_seed")) spec.disorder.master_seed = get_uint(cfg, "master_seed");
  if (cfg.contains("samples")) spec.samples = get_uint(cfg, "samples");
  if (spec.samples < 1) throw ConfigError("key 'samples' must be >= 1");
  spec.disorder.validate();
  const std::size_t n = spec.disorder.n;

  spec.output_path = cfg.contains("output_path") ? get_string(cfg, "output_path")
                                                 : std::string(exp_name) + ".csv";

  auto read_times = [&] {
    if (cfg.contains("t_min")) spec.t_min = get_real(cfg, "t_min");
    if (cfg.contains("t_max")) spec.t_max = get_real(cfg, "t_max");
    if (cfg.contains("t_points")) spec.t_points = get_uint(cfg, "t_points");
    if (cfg.contains("t_grid")) spec.t_grid = get_string(cfg, "t_grid");
    if (!(spec.t_min > 0.0) || !(spec.t_max > spec.t_min))
      throw ConfigError("keys 't_min'/'t_max' must satisfy 0 < t_min < t_max");
    if (spec.t_points < 2) throw ConfigError("key 't_points' must be >= 2");
    if (spec.t_grid != "log" && spec.t_grid != "linear")
      throw ConfigError("key 't_grid' must be 'log' or 'linear'");
  };
  auto read_window = [&] {
    if (cfg.contains("window_lo")) spec.window_lo = get_real(cfg, "window_lo");
    if (cfg.contains("window_hi")) spec.window_hi = get_real(cfg, "window_hi");
    if (!(spec.window_lo < spec.window_hi))
      throw ConfigError("keys 'window_lo'/'window_hi' must be an increasing pair");
    if (spec.window_lo < spec.t_min || spec.window_hi > spec.t_max)
      throw ConfigError("keys 'window_lo'/'window_hi' must lie inside [t_min, t_max]");
  };

  switch (spec.experiment) {
    case Experiment::Correlator:
    case Experiment::KappaFit: {
      if (cfg.contains("j")) spec.j = get_uint(cfg, "j");
      if (spec.j < 1 || spec.j > n) throw ConfigError("key 'j' out of range [1, n]");
      spec.k_list = cfg.contains("k_list") ? get_uint_list(cfg, "k_list") : default_k_list(n);
      if (spec.k_list.empty()) throw ConfigError("key 'k_list' must be nonempty");
      for (std::size_t i = 0; i + 1 < spec.k_list.size(); ++i)
        if (!(spec.k_list[i] < spec.k_list[i + 1]))
          throw ConfigError("key 'k_list' must be strictly ascending");
      for (std::size_t k : spec.k_list)
        if (k < 1 || k > n)
          throw ConfigError("key 'k_list' contains out-of-range site " + std::to_string(k));
      if (spec.j >= spec.k_list.front())
        throw ConfigError("key 'k_list' must start above j");
      if (spec.experiment == Experiment::KappaFit && spec.k_list.size() < 6)
        throw ConfigError("key 'k_list' needs >= 6 points for kappa-fit");
      break;
    }
    case Experiment::Transport: {
      if (cfg.contains("p")) spec.p = get_real(cfg, "p");
      if (!(spec.p > 0.0)) throw ConfigError("key 'p' must be > 0");
      read_times();
      read_window();
      break;
    }
    case Experiment::BetaVsLambda: {
      if (cfg.contains("p")) spec.p = get_real(cfg, "p");
      if (!(spec.p > 0.0)) throw ConfigError("key 'p' must be > 0");
      if (!cfg.contains("lambda_list"))
        throw ConfigError("missing required key 'lambda_list'");
      spec.lambda_list = get_real_list(cfg, "lambda_list");
      if (spec.lambda_list.empty()) throw ConfigError("key 'lambda_list' must be nonempty");
      for (double l : spec.lambda_list)
        if (!(l >= 0.0)) throw ConfigError("key 'lambda_list' entries must be >= 0");
      read_times();
      read_window();
      break;
    }
    case Experiment::Plr: {
      if (cfg.contains("a")) spec.a = get_real(cfg, "a");
      if (cfg.contains("b")) spec.b = get_real(cfg, "b");
      if (!(spec.a >= 0.0 && spec.a <= 1.0)) throw ConfigError("key 'a' must lie in [0,1]");
      if (!(spec.b > 0.0)) throw ConfigError("key 'b' must be > 0");
      if (cfg.contains("t_max_list")) spec.t_max_list = get_real_list(cfg, "t_max_list");
      if (spec.t_max_list.empty()) throw ConfigError("key 't_max_list' must be nonempty");
      for (std::size_t i = 0; i + 1 < spec.t_max_list.size(); ++i)
        if (!(spec.t_max_list[i] < spec.t_max_list[i + 1]))
          throw ConfigError("key 't_max_list' must be strictly ascending");
      if (!(spec.t_max_list.front() >= 1.0))
        throw ConfigError("key 't_max_list' entries must be >= 1");
      if (n < 8) throw ConfigError("key 'n' too small for the witness grid (need n >= 8)");
      break;
    }
    case Experiment::Number: {
      read_times();
      const bool has_wall = cfg.contains("eta_wall"), has_list = cfg.contains("eta_list");
      if (has_wall && has_list)
        throw ConfigError("keys 'eta_wall' and 'eta_list' are mutually exclusive");
      if (has_list) {
        spec.eta_list = get_real_list(cfg, "eta_list");
        if (spec.eta_list.size() != n)
          throw ConfigError("key 'eta_list' must have exactly n entries");
        for (double e : spec.eta_list)
          if (!(e >= 0.0 && e <= 1.0))
            throw ConfigError("key 'eta_list' entries must lie in [0,1]");
      } else {
        spec.eta_wall = has_wall ? get_uint(cfg, "eta_wall") : n / 2;
        if (spec.eta_wall > n) throw ConfigError("key 'eta_wall' out of range [0, n]");
      }
      const bool has_smax = cfg.contains("s_max"), has_slist = cfg.contains("s_list");
      if (has_smax && has_slist)
        throw ConfigError("keys 's_max' and 's_list' are mutually exclusive");
      if (has_slist) {
        spec.s_list = get_uint_list(cfg, "s_list");
      } else {
        const std::size_t s_max = has_smax ? get_uint(cfg, "s_max") : std::max<std::size_t>(n / 4, 1);
        if (s_max < 1 || s_max > n) throw ConfigError("key 's_max' out of range [1, n]");
        spec.s_list.resize(s_max);
        for (std::size_t i = 0; i < s_max; ++i) spec.s_list[i] = i + 1;
      }
      if (spec.s_list.empty()) throw ConfigError("key 's_list' must be nonempty");
      for (std::size_t s : spec.s_list)
        if (s < 1 || s > n)
          throw ConfigError("key 's_list' contains out-of-range site " + std::to_string(s));
      break;
    }
  }
  return spec;
}

// Canonical JSON form of the disorder model, stamped into every sidecar.
inline json disorder_to_json(const DisorderConfig& c) {
  return json{{"n", c.n},
              {"lambda", c.lambda},
              {"envelope_exponent", c.envelope_exponent},
              {"distribution",
               {{"type", "uniform_symmetric"}, {"halfwidth", c.distribution.halfwidth}}},
              {"master_seed", c.master_seed}};
}

// Flat resolved config: feeding this back in reproduces the run exactly.
inline json spec_to_json(const ExperimentSpec& s) {
  json out{{"experiment", experiment_name(s.experiment)},
           {"n", s.disorder.n},
           {"lambda", s.disorder.lambda},
           {"halfwidth", s.disorder.distribution.halfwidth},
           {"envelope_exponent", s.disorder.envelope_exponent},
           {"master_seed", s.disorder.master_seed},
           {"samples", s.samples},
           {"output_path", s.output_path}};
  auto put_times = [&] {
    out["t_min"] = s.t_min;
    out["t_max"] = s.t_max;
    out["t_points"] = s.t_points;
    out["t_grid"] = s.t_grid;
  };
  switch (s.experiment) {
    case Experiment::Correlator:
    case Experiment::KappaFit:
      out["j"] = s.j;
      out["k_list"] = s.k_list;
      break;
    case Experiment::Transport:
      out["p"] = s.p;
      put_times();
      out["window_lo"] = s.window_lo;
      out["window_hi"] = s.window_hi;
      break;
    case Experiment::BetaVsLambda:
      out["p"] = s.p;
      out["lambda_list"] = s.lambda_list;
      put_times();
      out["window_lo"] = s.window_lo;
      out["window_hi"] = s.window_hi;
      break;
    case Experiment::Plr:
      out["a"] = s.a;
      out["b"] = s.b;
      out["t_max_list"] = s.t_max_list;
      break;
    case Experiment::Number:
      put_times();
      if (!s.eta_list.empty())
        out["eta_list"] = s.eta_list;
      else
        out["eta_wall"] = s.eta_wall;
      out["s_list"] = s.s_list;
      break;
  }
  return out;
}

// Loads a config file: .json parsed as JSON (a sidecar's "config" object is
// accepted), anything else as flat key = value text.
inline ExperimentSpec load_spec(const std::string& path,
                                const std::string& experiment_override = "") {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json cfg;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + path + "': " + e.what());
    }
  } else {
    cfg = cfgdetail::parse_key_value_text(in);
  }
  try {
    return resolve_spec(cfg, experiment_override);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

}  // namespace plr
