#pragma once

// Command-line front end. run() is the whole program minus process plumbing,
// so tests can drive it with string arguments and capture both streams.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sisi/sisi.hpp"

namespace sisi::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kBadInput = 2, kNonConvergence = 3 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NegativeParameter:
    case ErrorKind::InvalidPoint:
    case ErrorKind::InvalidTensor:
    case ErrorKind::DegenerateInput:
      return kBadInput;
    case ErrorKind::NonConvergence:
      return kNonConvergence;
    default:
      return kNegative;
  }
}

class BadInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ModelParams params;
  std::optional<Vec4> init;
  bool init_from_preset = false;  // classify ignores a figure's start point
  std::size_t max_iter = 1'000'000;
  double tol_step = 1e-12;
  double tol_fix = 1e-10;
  std::uint64_t seed = 1;
  std::optional<int> grid;
  int conjecture = 2;
  int points = 5;
};

inline double parse_number(const std::string& key, const std::string& text) {
  const auto v = parse_double(text);
  if (!v) throw BadInput("cannot parse '" + text + "' as a number for " + key);
  return *v;
}

inline std::uint64_t parse_count(const std::string& key, const std::string& text) {
  const auto v = parse_double(text);
  if (!v || *v < 0 || *v != std::floor(*v) || *v > 1.8e19) {
    throw BadInput("'" + text + "' is not a non-negative integer for " + key);
  }
  return static_cast<std::uint64_t>(*v);
}

inline Vec4 parse_point(const std::string& text) {
  Vec4 c{};
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i == 4) throw BadInput("initial point needs exactly four coordinates: " + text);
    c[i++] = parse_number("init", item);
  }
  if (i != 4) throw BadInput("initial point needs exactly four coordinates: " + text);
  return c;
}

inline void apply_key(RunConfig& cfg, std::string key, const std::string& value) {
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  key = trim(key);
  const std::string v = trim(value);
  auto& p = cfg.params;
  if (key == "b") p.b = parse_number(key, v);
  else if (key == "alpha") p.alpha = parse_number(key, v);
  else if (key == "beta1") p.beta1 = parse_number(key, v);
  else if (key == "beta2") p.beta2 = parse_number(key, v);
  else if (key == "k1") p.k1 = parse_number(key, v);
  else if (key == "k2") p.k2 = parse_number(key, v);
  else if (key == "init") {
    cfg.init = parse_point(v);
    cfg.init_from_preset = false;
  }
  else if (key == "max_iter") cfg.max_iter = parse_count(key, v);
  else if (key == "tol_step") cfg.tol_step = parse_number(key, v);
  else if (key == "tol_fix") cfg.tol_fix = parse_number(key, v);
  else if (key == "seed") cfg.seed = parse_count(key, v);
  else if (key == "grid") cfg.grid = static_cast<int>(parse_count(key, v));
  else if (key == "conjecture") cfg.conjecture = static_cast<int>(parse_count(key, v));
  else if (key == "points") cfg.points = static_cast<int>(parse_count(key, v));
  else throw BadInput("unknown key '" + key + "'");
}

/// key=value lines; blank lines and '#' comments are skipped. Header lines
/// written by echo_config ("# key=value") are therefore ignored, which lets a
/// report's body be fed back after stripping the "# " prefix.
inline void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw BadInput("config line " + std::to_string(lineno) + ": expected key=value");
    apply_key(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

/// Canonical key=value rendering of the effective configuration.
inline std::string config_text(const RunConfig& cfg, bool scan = false) {
  std::ostringstream os;
  const auto& p = cfg.params;
  if (!scan) {
    os << "b=" << format_shortest(p.b) << '\n'
       << "alpha=" << format_shortest(p.alpha) << '\n'
       << "beta1=" << format_shortest(p.beta1) << '\n'
       << "beta2=" << format_shortest(p.beta2) << '\n'
       << "k1=" << format_shortest(p.k1) << '\n'
       << "k2=" << format_shortest(p.k2) << '\n';
    if (cfg.init) {
      const auto& c = *cfg.init;
      os << "init=" << format_shortest(c[0]) << ',' << format_shortest(c[1]) << ',' << format_shortest(c[2]) << ','
         << format_shortest(c[3]) << '\n';
    }
  } else {
    os << "conjecture=" << cfg.conjecture << '\n' << "points=" << cfg.points << '\n';
  }
  os << "max_iter=" << cfg.max_iter << '\n'
     << "tol_step=" << format_shortest(cfg.tol_step) << '\n'
     << "tol_fix=" << format_shortest(cfg.tol_fix) << '\n'
     << "seed=" << cfg.seed << '\n';
  if (cfg.grid) os << "grid=" << *cfg.grid << '\n';
  return os.str();
}

inline void echo_config(std::ostream& os, const RunConfig& cfg, bool scan = false) {
  std::stringstream ss(config_text(cfg, scan));
  std::string line;
  while (std::getline(ss, line)) os << "# " << line << '\n';
}

// ---------------------------------------------------------------------------
// JSON views

inline nlohmann::json to_json(const ModelParams& p) {
  return {{"b", p.b}, {"alpha", p.alpha}, {"beta1", p.beta1}, {"beta2", p.beta2}, {"k1", p.k1}, {"k2", p.k2}};
}

inline nlohmann::json to_json(const Vec4& c) { return nlohmann::json::array({c[0], c[1], c[2], c[3]}); }

inline nlohmann::json to_json(const Spectrum& s) {
  auto arr = nlohmann::json::array();
  for (const auto& mu : s) arr.push_back({{"re", mu.real()}, {"im", mu.imag()}, {"abs", std::abs(mu)}});
  return arr;
}

inline nlohmann::json to_json(const PredictedLimit& pl) {
  nlohmann::json j{{"regime", regime_info(pl.regime).id},
                   {"target", pl.target},
                   {"conjectural", pl.conjectural},
                   {"depends_on_initial", pl.depends_on_initial}};
  auto pins = nlohmann::json::array();
  for (const auto& c : pl.pinned) pins.push_back(c ? nlohmann::json(*c) : nlohmann::json(nullptr));
  j["pinned"] = pins;
  if (pl.literal_u) j["literal_u"] = *pl.literal_u;
  return j;
}

inline nlohmann::json to_json(const LimitReport& r) {
  nlohmann::json j{{"converged", r.converged},
                   {"iterations", r.iterations},
                   {"final_step", r.final_step},
                   {"limit", to_json(r.limit.coords())}};
  j["snapped_to"] = r.snapped_to ? nlohmann::json(*r.snapped_to) : nlohmann::json(nullptr);
  j["predicted"] = r.predicted ? to_json(*r.predicted) : nlohmann::json(nullptr);
  j["match"] = r.match ? nlohmann::json(*r.match) : nlohmann::json(nullptr);
  if (r.predicted && r.converged) j["deviation"] = r.predicted->deviation(r.limit);
  return j;
}

inline nlohmann::json to_json(const ScanRun& run) {
  nlohmann::json j{{"cell", run.cell}, {"params", to_json(run.params)}, {"verdict", to_string(run.verdict)}};
  const auto& p = run.params;
  j["threshold"] = p.beta1 * p.k1 > p.b + p.alpha ? "beta1*k1>b+alpha" : "beta1*k1<=b+alpha";
  if (run.point >= 0) j["point"] = run.point;
  if (run.s0) j["s0"] = to_json(run.s0->coords());
  if (run.report) j["report"] = to_json(*run.report);
  return j;
}

inline nlohmann::json to_json(const FixedPoint& fp) {
  nlohmann::json j{{"label", fp.label},
                   {"kind", fp.kind == FixedPointKind::Point ? "point" : "family"},
                   {"description", fp.description},
                   {"residual", fp.residual}};
  if (fp.kind == FixedPointKind::Point) j["point"] = to_json(fp.point().coords());
  if (fp.force) j["force"] = *fp.force;
  if (fp.stability) {
    j["stability"] = {{"class", to_string(fp.stability->cls)},
                      {"eigenvalues", to_json(fp.stability->eigenvalues)},
                      {"closed_form", fp.stability->in_scope}};
  }
  if (!fp.notes.empty()) j["notes"] = fp.notes;
  return j;
}

// ---------------------------------------------------------------------------
// Subcommands

struct Context {
  RunConfig cfg;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  std::string format = "text";
  std::size_t stride = 1;
  unsigned threads = 1;
};

inline std::string point_text(const Vec4& c) {
  return format_double(c[0]) + "," + format_double(c[1]) + "," + format_double(c[2]) + "," + format_double(c[3]);
}

inline int cmd_validate(Context& ctx) {
  auto& os = *ctx.out;
  echo_config(os, ctx.cfg);
  const auto report = validate_params(ctx.cfg.params);
  if (report.admissible()) {
    os << "admissible: yes\n";
    return kOk;
  }
  os << "admissible: no\n";
  for (const auto& v : report.violations) {
    os << "violation " << v.id << ": " << v.condition << " (value " << format_double(v.value) << ", bound "
       << format_shortest(v.bound) << ")\n";
  }
  return kNegative;
}

inline int cmd_simulate(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (!cfg.init) throw BadInput("simulate needs an initial point (--init or --figure)");
  require_admissible(cfg.params);
  const SimplexPoint s0(*cfg.init);
  auto& os = *ctx.out;
  echo_config(os, cfg);
  write_trajectory_header(os);
  const std::size_t stride = std::max<std::size_t>(ctx.stride, 1);
  std::size_t last_written = 0, last_n = 0;
  Vec4 last{};
  auto observer = [&](std::size_t n, const Vec4& c) {
    last = c;
    last_n = n;
    if (n % stride == 0) {
      write_trajectory_row(os, n, c);
      last_written = n;
    }
  };
  const LimitOptions opt{cfg.max_iter, cfg.tol_step, cfg.tol_fix};
  const auto r = detect_and_compare(s0, cfg.params, opt, observer);
  if (last_written != last_n) write_trajectory_row(os, last_n, last);

  os << "# converged=" << (r.converged ? "true" : "false") << " iterations=" << r.iterations
     << " final_step=" << format_double(r.final_step) << " limit=" << point_text(r.limit.coords())
     << " snapped=" << r.snapped_to.value_or("none");
  if (r.predicted) {
    os << " predicted=" << r.predicted->target << " regime=" << regime_info(r.predicted->regime).id
       << " conjectural=" << (r.predicted->conjectural ? "true" : "false");
  } else {
    os << " predicted=none";
  }
  os << " match=" << (r.match ? (*r.match ? "true" : "false") : "n/a") << '\n';
  if (!r.converged) return kNonConvergence;
  if (r.match && !*r.match) return kNegative;
  return kOk;
}

inline int cmd_fixpoints(Context& ctx) {
  const auto catalog = fixed_point_set(ctx.cfg.params);
  auto& os = *ctx.out;
  if (ctx.format == "json") {
    nlohmann::json j{{"params", to_json(ctx.cfg.params)}, {"fixed_points", nlohmann::json::array()}};
    for (const auto& e : catalog.entries) j["fixed_points"].push_back(to_json(e));
    j["rejected"] = nlohmann::json::array();
    for (const auto& r : catalog.rejected) {
      j["rejected"].push_back({{"label", r.label}, {"reason", r.reason}, {"residual", r.residual}});
    }
    os << j.dump() << '\n';
    return kOk;
  }
  echo_config(os, ctx.cfg);
  for (const auto& e : catalog.entries) {
    os << e.label << '\t';
    if (e.kind == FixedPointKind::Point) {
      os << "point\t" << point_text(e.point().coords());
    } else {
      os << "family\t" << e.description;
    }
    os << "\tresidual=" << format_double(e.residual);
    if (e.stability) {
      os << '\t' << to_string(e.stability->cls) << (e.stability->in_scope ? "" : " (generic spectrum)");
    }
    os << '\n';
  }
  for (const auto& r : catalog.rejected) {
    os << "# rejected " << r.label << ": " << r.reason << " (residual " << format_double(r.residual) << ")\n";
  }
  return kOk;
}

inline int cmd_classify(Context& ctx) {
  const auto& cfg = ctx.cfg;
  require_admissible(cfg.params);
  StabilityReport rep;
  Vec4 at{1, 0, 0, 0};
  const bool at_init = cfg.init && !cfg.init_from_preset;
  if (at_init) {
    const SimplexPoint s(*cfg.init);
    at = s.coords();
    rep = classify_point(s, cfg.params);
    if (rep.in_scope) rep = classify_lambda1(cfg.params);
  } else {
    rep = classify_lambda1(cfg.params);
  }
  auto& os = *ctx.out;
  if (ctx.format == "json") {
    nlohmann::json j{{"point", to_json(at)},
                     {"class", to_string(rep.cls)},
                     {"eigenvalues", to_json(rep.eigenvalues)},
                     {"closed_form", rep.in_scope}};
    if (at_init) j["fixed_point_residual"] = fixed_point_residual(SimplexPoint(at), cfg.params);
    os << j.dump() << '\n';
    return kOk;
  }
  echo_config(os, cfg);
  if (ctx.format == "csv") {
    os << "index,re,im,abs\n";
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& mu = rep.eigenvalues[i];
      os << i + 1 << ',' << format_double(mu.real()) << ',' << format_double(mu.imag()) << ','
         << format_double(std::abs(mu)) << '\n';
    }
    os << "# class=" << to_string(rep.cls) << '\n';
    return kOk;
  }
  os << "point: " << point_text(at) << '\n';
  if (at_init) os << "fixed-point residual: " << format_double(fixed_point_residual(SimplexPoint(at), cfg.params)) << '\n';
  os << "class: " << to_string(rep.cls) << (rep.in_scope ? " (closed-form rule)" : " (generic spectrum, outside the closed-form scope)") << '\n';
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& mu = rep.eigenvalues[i];
    os << "mu" << i + 1 << ": " << format_double(mu.real()) << (mu.imag() < 0 ? " - " : " + ")
       << format_double(std::abs(mu.imag())) << "i  |mu|=" << format_double(std::abs(mu)) << '\n';
  }
  return kOk;
}

inline int cmd_conjugacy(Context& ctx) {
  const auto& p = ctx.cfg.params;
  require_non_negative(p);
  const int grid = ctx.cfg.grid.value_or(10'000);
  const auto check = verify_conjugacy(p, grid);
  const auto fps = classify_1d_fixed_points(p);
  auto& os = *ctx.out;
  echo_config(os, ctx.cfg);
  const bool restricted = p.alpha == 0.0 && p.k2 == 0.0;
  os << "restricted regime (alpha=0, k2=0): " << (restricted ? "yes" : "no") << '\n'
     << "c=beta1*k1: " << format_double(p.beta1 * p.k1) << '\n'
     << "mu: " << format_double(check.map.mu) << (check.map.mu_in_range ? "" : "  (outside (1,3))") << '\n'
     << "h(x) = " << format_double(check.map.p) << "*x + " << format_double(check.map.q) << '\n'
     << "sup-norm over " << std::max(grid, 2) << " points: " << format_double(check.sup_norm) << '\n'
     << "conjugacy: " << (check.pass ? "PASS" : "FAIL") << '\n';
  const char* names[] = {"p1", "p2"};
  for (int i = 0; i < 2; ++i) {
    os << names[i] << " = " << format_double(fps[i].location) << "  f'=" << format_double(fps[i].derivative) << "  "
       << to_string(fps[i].cls) << (fps[i].in_unit_interval ? "" : "  (outside [0,1])") << '\n';
  }
  return check.pass ? kOk : kNegative;
}

inline int cmd_scan(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.conjecture != 1 && cfg.conjecture != 2) throw BadInput("--conjecture must be 1 or 2");
  const auto which = static_cast<Conjecture>(cfg.conjecture);
  const int res = cfg.grid.value_or(5);
  if (res < 1) throw BadInput("--grid must be >= 1");
  GridSpec g = default_grid(which, res);
  g.initial_points = cfg.points;
  g.seed = cfg.seed;
  g.limit = {cfg.max_iter, cfg.tol_step, cfg.tol_fix};
  g.threads = ctx.threads;
  const auto rep = conjecture_scan(which, g);
  auto& os = *ctx.out;
  nlohmann::json head{{"config", config_text(cfg, true)}, {"cells", rep.cells}};
  os << head.dump() << '\n';
  for (const auto& run : rep.runs) os << to_json(run).dump() << '\n';
  nlohmann::json summary{{"summary", true}};
  for (int v = 0; v < 6; ++v) summary[to_string(static_cast<Verdict>(v))] = rep.counts[v];
  os << summary.dump() << '\n';
  return rep.count(Verdict::Counterexample) > 0 ? kNegative : kOk;
}

inline int cmd_tensor_dump(Context& ctx) {
  const auto t = build_tensor(ctx.cfg.params);
  echo_config(*ctx.out, ctx.cfg);
  write_tensor_csv(*ctx.out, t);
  return kOk;
}

inline int cmd_curves(Context& ctx) {
  const auto c = fg_curves(ctx.cfg.params, ctx.cfg.grid.value_or(201));
  auto& os = *ctx.out;
  echo_config(os, ctx.cfg);
  os << "# g(0)=" << format_double(c.g_at_zero) << " asymptote=" << format_double(c.asymptote)
     << " slope_f=" << format_double(c.slope_f) << " slope_g0=" << format_double(c.slope_g_zero)
     << " sign_changes=" << c.sign_changes;
  for (double x : c.crossings) os << " crossing=" << format_double(x);
  os << '\n';
  write_curves_csv(os, c);
  return kOk;
}

// ---------------------------------------------------------------------------

struct RawOptions {
  std::vector<std::string> params;
  std::string init;
  std::optional<int> figure;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iter;
  std::optional<double> tol_step, tol_fix;
  std::optional<int> grid, conjecture, points;
  std::string format = "text";
  std::size_t stride = 1;
  unsigned threads = 1;
};

inline RunConfig resolve(const RawOptions& raw) {
  RunConfig cfg;
  if (raw.figure) {
    const auto preset = figure_preset(*raw.figure);
    if (!preset) throw BadInput("no preset for figure " + std::to_string(*raw.figure) + " (valid: 1-6)");
    cfg.params = preset->params;
    cfg.init = preset->init;
    cfg.init_from_preset = true;
  }
  if (!raw.config.empty()) {
    std::ifstream in(raw.config);
    if (!in) throw BadInput("cannot read config file " + raw.config);
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
  }
  for (const auto& token : raw.params) {
    std::stringstream ss(token);
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      if (kv.empty()) continue;
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw BadInput("--params expects key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      if (key != "b" && key != "alpha" && key != "beta1" && key != "beta2" && key != "k1" && key != "k2") {
        throw BadInput("unknown parameter '" + key + "' (expected b, alpha, beta1, beta2, k1, k2)");
      }
      apply_key(cfg, key, kv.substr(eq + 1));
    }
  }
  if (!raw.init.empty()) {
    cfg.init = parse_point(raw.init);
    cfg.init_from_preset = false;
  }
  if (raw.seed) cfg.seed = *raw.seed;
  if (raw.max_iter) cfg.max_iter = *raw.max_iter;
  if (raw.tol_step) cfg.tol_step = *raw.tol_step;
  if (raw.tol_fix) cfg.tol_fix = *raw.tol_fix;
  if (raw.grid) cfg.grid = *raw.grid;
  if (raw.conjecture) cfg.conjecture = *raw.conjecture;
  if (raw.points) cfg.points = *raw.points;
  if (cfg.max_iter < 1) throw BadInput("max_iter must be >= 1");
  return cfg;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterate and analyse the two-strain SIS quadratic stochastic operator", "sisi"};
  app.require_subcommand(1);
  RawOptions raw;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--params", raw.params, "Parameters as key=value (b, alpha, beta1, beta2, k1, k2)");
    sub->add_option("--init", raw.init, "Initial point x,u,y,v");
    sub->add_option("--figure", raw.figure, "Figure preset 1-6");
    sub->add_option("--config", raw.config, "key=value configuration file");
    sub->add_option("--out", raw.out, "Write output to this file instead of stdout");
    sub->add_option("--seed", raw.seed, "Random seed");
    sub->add_option("--max-iter", raw.max_iter, "Iteration cap (default 1000000)");
    sub->add_option("--tol-step", raw.tol_step, "Step-size convergence tolerance (default 1e-12)");
    sub->add_option("--tol-fix", raw.tol_fix, "Snap distance to catalog fixed points (default 1e-10)");
    sub->add_option("--grid", raw.grid, "Grid size (scan: values per axis)");
  };

  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(Context&);
  };
  const std::vector<Sub> subs{
      {"validate", "Check the admissibility conditions", cmd_validate},
      {"simulate", "Iterate from an initial point and detect the limit", cmd_simulate},
      {"fixpoints", "List the fixed points and their stability", cmd_fixpoints},
      {"classify", "Classify the vertex (1,0,0,0), or --init point, by its spectrum", cmd_classify},
      {"conjugacy", "Check the conjugacy with the logistic map", cmd_conjugacy},
      {"scan", "Grid scan of a conjectured regime (JSON lines)", cmd_scan},
      {"tensor-dump", "Write the 64 heredity coefficients as CSV", cmd_tensor_dump},
      {"curves", "Sample the f and g curves of the force-of-infection equation", cmd_curves},
  };
  std::map<std::string, CLI::App*> handles;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    handles[s.name] = sub;
  }
  handles["simulate"]->add_option("--stride", raw.stride, "Write every n-th iterate (the last is always written)");
  handles["fixpoints"]->add_option("--format", raw.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  handles["classify"]->add_option("--format", raw.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  handles["scan"]->add_option("--conjecture", raw.conjecture, "1 (beta2=0) or 2 (all rates positive)");
  handles["scan"]->add_option("--points", raw.points, "Initial points per cell (default 5)");
  handles["scan"]->add_option("--threads", raw.threads, "Worker threads; output does not depend on it");

  std::vector<const char*> argv{"sisi"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }

  const Sub* chosen = nullptr;
  for (const auto& s : subs)
    if (handles[s.name]->parsed()) chosen = &s;

  try {
    Context ctx;
    ctx.cfg = resolve(raw);
    ctx.err = &err;
    ctx.format = raw.format;
    ctx.stride = raw.stride;
    ctx.threads = std::max(1u, raw.threads);
    std::ofstream file;
    if (!raw.out.empty()) {
      file.open(raw.out);
      if (!file) throw BadInput("cannot open " + raw.out + " for writing");
      ctx.out = &file;
    } else {
      ctx.out = &out;
    }
    return chosen->fn(ctx);
  } catch (const BadInput& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}

}  // namespace sisi::cli
