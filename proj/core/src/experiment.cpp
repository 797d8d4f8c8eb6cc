#include "hlab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hlab/detail/format.hpp"

namespace hlab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() { return "harnack-lab 0.1.0"; }

// ---------------------------------------------------------------------------
// config parsing

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  ExperimentConfig cfg;
  cfg.raw_text_ = text;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    cfg.sections_[section][key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

bool ExperimentConfig::has(const std::string& s, const std::string& k) const {
  const auto it = sections_.find(s);
  return it != sections_.end() && it->second.count(k) > 0;
}

std::string ExperimentConfig::get(const std::string& s, const std::string& k,
                                  const std::string& fallback) const {
  const auto it = sections_.find(s);
  if (it == sections_.end()) return fallback;
  const auto jt = it->second.find(k);
  return jt == it->second.end() ? fallback : jt->second;
}

std::string ExperimentConfig::require(const std::string& s,
                                      const std::string& k) const {
  if (!has(s, k)) throw ConfigError("missing config key [" + s + "] " + k);
  return get(s, k, "");
}

double ExperimentConfig::get_double(const std::string& s, const std::string& k,
                                    double fallback) const {
  if (!has(s, k)) return fallback;
  const std::string v = get(s, k, "");
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number for [" + s + "] " + k + ": '" + v + "'");
  }
}

int ExperimentConfig::get_int(const std::string& s, const std::string& k,
                              int fallback) const {
  const double x = get_double(s, k, fallback);
  const int i = static_cast<int>(std::lround(x));
  if (std::fabs(x - i) > 1e-9)
    throw ConfigError("expected integer for [" + s + "] " + k);
  return i;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& s, const std::string& k,
                                        std::uint64_t fallback) const {
  if (!has(s, k)) return fallback;
  const std::string v = get(s, k, "");
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("bad unsigned integer for [" + s + "] " + k);
  }
}

std::vector<std::string> ExperimentConfig::get_list(const std::string& s,
                                                    const std::string& k) const {
  return split_ws(get(s, k, ""));
}

std::vector<double> ExperimentConfig::get_double_list(const std::string& s,
                                                      const std::string& k) const {
  std::vector<double> out;
  for (const auto& tok : get_list(s, k)) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + tok + "' in list [" + s + "] " + k);
    }
  }
  return out;
}

void ExperimentConfig::set(const std::string& s, const std::string& k,
                           const std::string& v) {
  sections_[s][k] = v;
}

// ---------------------------------------------------------------------------
// builders

ModelGeometry build_geometry(const ExperimentConfig& cfg) {
  const std::string kind = cfg.get("geometry", "kind", "flat_torus");
  const int n = cfg.get_int("geometry", "n", kind == "flat_torus" ? 1 : 2);
  if (kind == "flat_torus")
    return ModelGeometry::flat_torus(
        n, cfg.get_double("geometry", "side", 2.0 * std::numbers::pi));
  if (kind == "shrinking_sphere")
    return ModelGeometry::shrinking_sphere(n,
                                           cfg.get_double("geometry", "t_max", -1.0));
  throw ConfigError("unknown geometry kind '" + kind + "'");
}

SpatialGrid build_grid(const ExperimentConfig& cfg, const ModelGeometry& geo) {
  return SpatialGrid::make(geo, cfg.get_int("grid", "nodes", 256));
}

SourceSpec build_source(const ExperimentConfig& cfg) {
  const std::string kind = cfg.get("equation", "kind", "heat");
  if (kind == "heat") return SourceSpec::none();
  if (kind == "log")
    return SourceSpec::log_reaction(cfg.get_double("equation", "a", 1.0));
  if (kind == "power") {
    const std::string conv = cfg.get("equation", "exponent", "u_pow_l");
    if (conv != "u_pow_l" && conv != "u_pow_l_minus_1")
      throw ConfigError("unknown exponent convention '" + conv + "'");
    return SourceSpec::power(
        cfg.get_double("equation", "l", 1.0), cfg.get_double("equation", "h", 0.0),
        cfg.get_double("equation", "delta1", 0.0),
        cfg.get_double("equation", "delta2", 0.0),
        cfg.get_double("equation", "delta3", 0.0),
        conv == "u_pow_l" ? PowerExponent::UPowL : PowerExponent::UPowLMinus1);
  }
  throw ConfigError("unknown equation kind '" + kind + "'");
}

TrigModes random_trig_modes(const ModelGeometry& geo, double base,
                            double amplitude, int modes, std::uint64_t seed) {
  if (modes < 1) throw std::invalid_argument("random_trig_modes: modes >= 1");
  std::mt19937_64 eng(seed);
  auto uniform = [&eng]() {  // [-1, 1), bit-identical across platforms
    return 2.0 * ((eng() >> 11) * 0x1.0p-53) - 1.0;
  };
  const bool torus = geo.periodic();
  TrigModes m;
  m.base = base;
  m.k_unit = torus ? 2.0 * std::numbers::pi / geo.side() : 1.0;
  m.cos_coef.resize(modes);
  m.sin_coef.assign(modes, 0.0);
  double norm = 0.0;
  for (int k = 0; k < modes; ++k) {
    m.cos_coef[k] = uniform();
    if (torus) m.sin_coef[k] = uniform();  // sin modes break pole regularity
    norm += std::hypot(m.cos_coef[k], m.sin_coef[k]);
  }
  if (norm == 0.0) norm = 1.0;
  const double scale = amplitude / norm;
  for (int k = 0; k < modes; ++k) {
    m.cos_coef[k] *= scale;
    m.sin_coef[k] *= scale;
  }
  return m;
}

std::vector<double> evaluate_trig(const TrigModes& m, const SpatialGrid& grid) {
  std::vector<double> u(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const double x = grid.points[i];
    double v = m.base;
    for (std::size_t k = 0; k < m.cos_coef.size(); ++k) {
      const double w = (k + 1) * m.k_unit * x;
      v += m.cos_coef[k] * std::cos(w) + m.sin_coef[k] * std::sin(w);
    }
    u[i] = v;
  }
  return u;
}

std::vector<double> random_trig_data(const ModelGeometry& geo,
                                     const SpatialGrid& grid, double base,
                                     double amplitude, int modes,
                                     std::uint64_t seed) {
  return evaluate_trig(random_trig_modes(geo, base, amplitude, modes, seed), grid);
}

std::vector<double> build_initial_data(const ExperimentConfig& cfg,
                                       const ModelGeometry& geo,
                                       const SpatialGrid& grid,
                                       std::uint64_t seed) {
  const std::string kind = cfg.get("initial", "kind", "cosine");
  if (kind == "constant") {
    return std::vector<double>(grid.count(),
                               cfg.get_double("initial", "value", 1.0));
  }
  const double base = cfg.get_double("initial", "base", 1.0);
  const double amp = cfg.get_double("initial", "amplitude", 0.5);
  if (kind == "cosine") {
    const double k_unit =
        geo.periodic() ? 2.0 * std::numbers::pi / geo.side() : 1.0;
    std::vector<double> u(grid.count());
    for (std::size_t i = 0; i < grid.count(); ++i)
      u[i] = base + amp * std::cos(k_unit * grid.points[i]);
    return u;
  }
  if (kind == "random_trig")
    return random_trig_data(geo, grid, base, amp,
                            cfg.get_int("initial", "modes", 3), seed);
  throw ConfigError("unknown initial data kind '" + kind + "'");
}

double resolve_curvature_bound(const ExperimentConfig& cfg,
                               const ModelGeometry& geo, double t_end) {
  const std::string k = cfg.get("triple", "K", "auto");
  if (k == "auto") return geo.ricci_bound(t_end);
  try {
    return std::stod(k);
  } catch (const std::exception&) {
    throw ConfigError("bad value for [triple] K: '" + k + "'");
  }
}

ParamTriple build_triple(const ExperimentConfig& cfg, double K) {
  const std::string family = cfg.get("triple", "family", "li_yau");
  const int n = cfg.get_int("triple", "n", cfg.get_int("geometry", "n", 1));
  if (family == "li_yau")
    return ParamTriple::li_yau(cfg.get_double("triple", "alpha", 2.0),
                               cfg.get_double("triple", "theta", 1.0), K, n);
  if (family == "hamilton") return ParamTriple::hamilton(K, n);
  if (family == "li_xu") return ParamTriple::li_xu(K, n);
  if (family == "linear_li_xu")
    return ParamTriple::linear_li_xu(cfg.get_double("triple", "mu", 0.25), K, n);
  throw ConfigError("unknown triple family '" + family + "'");
}

// ---------------------------------------------------------------------------
// shared command plumbing

namespace {

struct RunContext {
  fs::path out_dir;
  std::chrono::steady_clock::time_point start;
  std::uint64_t seed = 0;
  double tol_override = -1.0;  // < 0 means "use config"
};

RunContext begin_run(const ExperimentConfig& cfg, const CliOverrides& ov) {
  RunContext ctx;
  std::string out = cfg.get("output", "dir", "out");
  if (ov.out) out = *ov.out;
  if (const char* env = std::getenv("HARNACK_LAB_OUT")) out = env;
  ctx.out_dir = out;
  fs::create_directories(ctx.out_dir);
  ctx.start = std::chrono::steady_clock::now();
  ctx.seed = ov.seed ? *ov.seed : cfg.get_u64("run", "seed", 1);
  if (ov.tol) ctx.tol_override = *ov.tol;
  return ctx;
}

void write_manifest(const RunContext& ctx, const ExperimentConfig& cfg,
                    const std::string& command, int exit_code) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - ctx.start)
                      .count();
  std::ofstream m(ctx.out_dir / "manifest.txt");
  m << "version: " << version_string() << "\n"
    << "command: " << command << "\n"
    << "seed: " << ctx.seed << "\n"
    << "exit: " << exit_code << "\n"
    << "wall_ms: " << ms << "\n"
    << "config:\n"
    << cfg.raw_text() << "\n";
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("failed to write " + p.string());
}

double config_tol(const ExperimentConfig& cfg, const RunContext& ctx,
                  const std::string& section, double fallback) {
  return ctx.tol_override >= 0.0 ? ctx.tol_override
                                 : cfg.get_double(section, "tol", fallback);
}

SolutionField solve_from_config(const ExperimentConfig& cfg, const RunContext& ctx,
                                const ModelGeometry& geo, const SpatialGrid& grid) {
  const SourceSpec src = build_source(cfg);
  const std::vector<double> u0 = build_initial_data(cfg, geo, grid, ctx.seed);
  const double t_end = cfg.get_double("solve", "t_end", 1.0);
  SolveOptions opts;
  const std::string dt = cfg.get("solve", "dt", "auto");
  if (dt != "auto") opts.dt = cfg.get_double("solve", "dt", 0.0);
  opts.store_max_slices = cfg.get_int("solve", "store_slices", 801);
  return solve(geo, grid, u0, src, t_end, opts);
}

struct TimeWindow {
  double lo, hi;
};

TimeWindow window_from(const ExperimentConfig& cfg, const std::string& section,
                       double t_end) {
  const auto w = cfg.get_double_list(section, "t_window");
  if (w.empty()) return {0.05 * t_end, t_end};
  if (w.size() != 2 || !(w[0] < w[1]))
    throw ConfigError("[" + section + "] t_window wants 'lo hi' with lo < hi");
  return {w[0], w[1]};
}

}  // namespace

// ---------------------------------------------------------------------------
// check-conditions

namespace {

ParamTriple conditions_triple(const ExperimentConfig& cfg, const std::string& family,
                              double K, int n) {
  if (family == "li_yau")
    return ParamTriple::li_yau(cfg.get_double("triple", "alpha", 2.0),
                               cfg.get_double("triple", "theta", 1.0), K, n);
  if (family == "hamilton") return ParamTriple::hamilton(K, n);
  if (family == "li_xu") return ParamTriple::li_xu(K, n);
  if (family == "linear_li_xu")
    return ParamTriple::linear_li_xu(cfg.get_double("triple", "mu", 0.25), K, n);
  throw ConfigError("unknown family '" + family + "' in [conditions]");
}

}  // namespace

int cmd_check_conditions(const ExperimentConfig& cfg, const CliOverrides& ov) {
  RunContext ctx;
  int exit_code = kExitOk;
  try {
    ctx = begin_run(cfg, ov);
    auto families = cfg.get_list("conditions", "families");
    if (families.empty())
      families = {"li_yau", "hamilton", "li_xu", "linear_li_xu"};
    const double K = cfg.get_double("conditions", "K", 1.0);
    const int n = cfg.get_int("conditions", "n", 2);
    const double t_lo = cfg.get_double("conditions", "t_lo", 1e-3);
    const double t_hi = cfg.get_double("conditions", "t_hi", 10.0);
    const int samples = cfg.get_int("conditions", "samples", 2000);
    const double tol = config_tol(cfg, ctx, "conditions", 1e-9);
    bool all_pass = true;
    for (const auto& fam : families) {
      const ParamTriple triple = conditions_triple(cfg, fam, K, n);
      const ConditionReport rep = check_conditions(triple, t_lo, t_hi, samples, tol);
      all_pass = all_pass && rep.pass;
      std::ofstream csv(ctx.out_dir / ("conditions_" + fam + ".csv"),
                        std::ios::binary);
      rep.write_csv(csv);
      write_text(ctx.out_dir / ("conditions_" + fam + ".json"), rep.to_json());
    }
    exit_code = all_pass ? kExitOk : kExitViolations;
  } catch (const std::exception& e) {
    std::cerr << "check-conditions: " << e.what() << "\n";
    exit_code = kExitConfig;
  }
  if (!ctx.out_dir.empty()) write_manifest(ctx, cfg, "check-conditions", exit_code);
  return exit_code;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const ExperimentConfig& cfg, const CliOverrides& ov) {
  RunContext ctx;
  int exit_code = kExitOk;
  try {
    ctx = begin_run(cfg, ov);
    const ModelGeometry geo = build_geometry(cfg);
    const SpatialGrid grid = build_grid(cfg, geo);
    try {
      const SolutionField field = solve_from_config(cfg, ctx, geo, grid);
      std::ofstream bin(ctx.out_dir / "field.bin", std::ios::binary);
      field.write_binary(bin);
      std::ofstream csv(ctx.out_dir / "field_sample.csv", std::ios::binary);
      const std::size_t stride = std::max<std::size_t>(1, field.n_times() / 50);
      field.write_csv(csv, stride);
    } catch (const SolveAborted& ab) {
      json j;
      j["reason"] = ab.reason() == SolveAborted::Reason::PositivityLost
                        ? "positivity_lost"
                        : "overflow";
      j["t_reached"] = ab.t_reached();
      write_text(ctx.out_dir / "abort.json", j.dump(2));
      std::cerr << "solve: " << ab.what() << "\n";
      exit_code = kExitSolverAbort;
    }
  } catch (const std::exception& e) {
    std::cerr << "solve: " << e.what() << "\n";
    exit_code = kExitConfig;
  }
  if (!ctx.out_dir.empty()) write_manifest(ctx, cfg, "solve", exit_code);
  return exit_code;
}

// ---------------------------------------------------------------------------
// verify

namespace {

/// Reject triples whose admissibility system fails.  The check runs over
/// the family's canonical range extended to cover the run window, so a
/// defect outside the window (e.g. mu < 1/4 dipping negative near
/// Kt = 1/(2 mu)) still disqualifies the triple.
void require_admissible(const ExperimentConfig& cfg, const ParamTriple& triple,
                        double win_hi) {
  const double t_lo = cfg.get_double("conditions", "t_lo", 1e-3);
  const double t_hi =
      std::max(cfg.get_double("conditions", "t_hi", 10.0), win_hi);
  const int samples = cfg.get_int("conditions", "samples", 1024);
  const ConditionReport rep = check_conditions(triple, t_lo, t_hi, samples, 1e-9);
  if (!rep.pass)
    throw HypothesisError("triple " + triple.name() +
                          " fails conditions (6.1)/(6.2); worst margin " +
                          fmt17(rep.worst_margin()));
}

double resolve_x0(const ExperimentConfig& cfg, const SolutionField& field) {
  const std::string x0 = cfg.get("verify", "x0", "auto");
  // The sphere default anchors at the node nearest the north pole.
  if (x0 == "auto") return field.grid.points.front();
  try {
    return std::stod(x0);
  } catch (const std::exception&) {
    throw ConfigError("bad value for [verify] x0");
  }
}

}  // namespace

int cmd_verify(const ExperimentConfig& cfg, const CliOverrides& ov) {
  RunContext ctx;
  int exit_code = kExitOk;
  try {
    ctx = begin_run(cfg, ov);
    const ModelGeometry geo = build_geometry(cfg);
    const SpatialGrid grid = build_grid(cfg, geo);
    const double t_end = cfg.get_double("solve", "t_end", 1.0);
    const double K = resolve_curvature_bound(cfg, geo, t_end);
    const ParamTriple triple = build_triple(cfg, K);
    const TimeWindow win = window_from(cfg, "verify", t_end);
    const auto names = cfg.get_list("verify", "theorems");
    if (names.empty()) throw ConfigError("[verify] theorems list is empty");
    const std::string c_spec = cfg.get("verify", "C", "1.0");
    const bool fit = c_spec == "fit";
    const double C = fit ? 1.0 : cfg.get_double("verify", "C", 1.0);

    SolutionField field = [&] {
      const std::string load = cfg.get("verify", "load", "");
      if (!load.empty()) {
        std::ifstream in(load, std::ios::binary);
        if (!in) throw ConfigError("cannot open dump '" + load + "'");
        return SolutionField::read_binary(in);
      }
      return solve_from_config(cfg, ctx, geo, grid);
    }();

    VerifyOptions vopts;
    vopts.tol = config_tol(cfg, ctx, "verify", 1e-8);

    std::size_t total_violations = 0;
    json summary;
    json fits;
    for (const auto& name : names) {
      const auto th = theorem_from_string(name);
      if (!th) throw ConfigError("unknown theorem '" + name + "'");
      EstimateInstance inst =
          EstimateInstance::for_field(*th, field, triple, K, C);
      inst.R = cfg.get_double("verify", "R", 1.0);

      if (*th != Theorem::ClosedManifold)
        require_admissible(cfg, triple, win.hi);
      if (*th == Theorem::LocalPower || *th == Theorem::GlobalPower) {
        std::vector<double> sample_times;
        for (int i = 0; i <= 8; ++i)
          sample_times.push_back(win.lo + (win.hi - win.lo) * i / 8.0);
        const SourceValidation sv =
            validate_source(geo, grid, field.source, sample_times);
        write_text(ctx.out_dir / "source_validation.json", sv.to_json());
        if (!sv.pass)
          throw HypothesisError("source hypotheses fail: grad margin " +
                                fmt17(sv.worst_grad_margin) + ", lap margin " +
                                fmt17(sv.worst_lap_margin));
      }

      const Region region =
          (*th == Theorem::LocalPower || *th == Theorem::LocalLog ||
           *th == Theorem::LocalHeat)
              ? make_local_region(field, win.lo, win.hi, resolve_x0(cfg, field),
                                  inst.R)
              : make_global_region(field, win.lo, win.hi);

      if (fit && *th != Theorem::ClosedManifold) {
        fits[name] = fit_constant(field, inst, region);
        continue;
      }

      const EstimateReport rep = verify(field, inst, region, vopts);
      total_violations += rep.violations;
      std::ofstream csv(ctx.out_dir / ("estimate_" + name + ".csv"),
                        std::ios::binary);
      rep.write_csv(csv);
      summary[name] = json::parse(rep.to_json());

      // The closed-manifold theorem is stated with h(t) u^{l-1}; rerun the
      // twin reaction convention and report it alongside.
      if (*th == Theorem::ClosedManifold &&
          field.source.kind == SourceKind::Power) {
        ExperimentConfig twin = cfg;
        twin.set("equation", "exponent",
                 field.source.exponent == PowerExponent::UPowL
                     ? "u_pow_l_minus_1"
                     : "u_pow_l");
        const SolutionField alt = solve_from_config(twin, ctx, geo, grid);
        const EstimateReport alt_rep = closed_manifold_bound(
            alt, make_global_region(alt, win.lo, win.hi), vopts);
        total_violations += alt_rep.violations;
        std::ofstream alt_csv(
            ctx.out_dir / ("estimate_" + name + "_alt_exponent.csv"),
            std::ios::binary);
        alt_rep.write_csv(alt_csv);
        summary[name + "_alt_exponent"] = json::parse(alt_rep.to_json());
      }
    }
    if (fit) write_text(ctx.out_dir / "fit_constants.json", fits.dump(2));
    if (!summary.is_null())
      write_text(ctx.out_dir / "verify_summary.json", summary.dump(2));
    exit_code = total_violations == 0 ? kExitOk : kExitViolations;
  } catch (const SolveAborted& ab) {
    std::cerr << "verify: " << ab.what() << "\n";
    exit_code = kExitSolverAbort;
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    exit_code = kExitConfig;
  }
  if (!ctx.out_dir.empty()) write_manifest(ctx, cfg, "verify", exit_code);
  return exit_code;
}

// ---------------------------------------------------------------------------
// harnack

int cmd_harnack(const ExperimentConfig& cfg, const CliOverrides& ov) {
  RunContext ctx;
  int exit_code = kExitOk;
  try {
    ctx = begin_run(cfg, ov);
    const ModelGeometry geo = build_geometry(cfg);
    const SpatialGrid grid = build_grid(cfg, geo);
    const double t_end = cfg.get_double("solve", "t_end", 1.0);
    const double K = resolve_curvature_bound(cfg, geo, t_end);
    const ParamTriple triple = build_triple(cfg, K);
    const TimeWindow win = window_from(cfg, "harnack", t_end);
    require_admissible(cfg, triple, win.hi);

    const SolutionField field = solve_from_config(cfg, ctx, geo, grid);

    HarnackInstance inst;
    const std::string kind = cfg.get("harnack", "kind", "heat");
    if (kind == "heat") inst.kind = HarnackKind::Heat;
    else if (kind == "log") inst.kind = HarnackKind::Log;
    else if (kind == "power_l_le_1") inst.kind = HarnackKind::PowerLle1;
    else if (kind == "power_l_gt_1") inst.kind = HarnackKind::PowerLgt1;
    else throw ConfigError("unknown harnack kind '" + kind + "'");
    inst.triple = triple;
    inst.K = K;
    inst.C = cfg.get_double("harnack", "C", 1.0);
    inst.l = field.source.l;
    inst.delta1 = field.source.delta1;
    inst.delta2 = field.source.delta2;
    inst.delta3 = field.source.delta3;
    inst.a = field.source.a;

    const Region region = make_global_region(field, win.lo, win.hi);
    const int nx = cfg.get_int("harnack", "nx", 10);
    const int nt = cfg.get_int("harnack", "nt", 5);
    std::vector<std::size_t> nodes, slices;
    for (int i = 0; i < nx; ++i)
      nodes.push_back(region.node_indices[i * region.node_indices.size() / nx]);
    for (int i = 0; i < nt; ++i)
      slices.push_back(region.time_indices[i * region.time_indices.size() / nt]);

    const HarnackReport rep =
        verify_harnack(field, inst, nodes, slices,
                       cfg.get_int("harnack", "quad_nodes", 129),
                       config_tol(cfg, ctx, "harnack", 1e-8));
    std::ofstream csv(ctx.out_dir / "harnack.csv", std::ios::binary);
    rep.write_csv(csv);
    write_text(ctx.out_dir / "harnack.json", rep.to_json());
    exit_code = rep.violations == 0 ? kExitOk : kExitViolations;
  } catch (const SolveAborted& ab) {
    std::cerr << "harnack: " << ab.what() << "\n";
    exit_code = kExitSolverAbort;
  } catch (const std::exception& e) {
    std::cerr << "harnack: " << e.what() << "\n";
    exit_code = kExitConfig;
  }
  if (!ctx.out_dir.empty()) write_manifest(ctx, cfg, "harnack", exit_code);
  return exit_code;
}

// ---------------------------------------------------------------------------
// sweep

namespace {

struct SweepCell {
  std::vector<std::pair<std::string, double>> params;
};

struct SweepRow {
  std::string values;
  int pass = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  std::string error;
};

SweepRow run_cell(const ExperimentConfig& base, const SweepCell& cell,
                  const std::string& action) {
  ExperimentConfig cfg = base;
  for (const auto& [key, value] : cell.params) {
    if (key == "mu" || key == "theta" || key == "alpha")
      cfg.set("triple", key, fmt17(value));
    else if (key == "K") {
      cfg.set("triple", "K", fmt17(value));
      cfg.set("conditions", "K", fmt17(value));
    } else if (key == "nodes")
      cfg.set("grid", "nodes", std::to_string(static_cast<int>(value)));
  }
  SweepRow row;
  try {
    if (action == "check-conditions") {
      const double K = cfg.get_double("conditions", "K", 1.0);
      const int n = cfg.get_int("conditions", "n", 2);
      const ParamTriple triple =
          conditions_triple(cfg, cfg.get("triple", "family", "li_yau"), K, n);
      const ConditionReport rep = check_conditions(
          triple, cfg.get_double("conditions", "t_lo", 1e-3),
          cfg.get_double("conditions", "t_hi", 10.0),
          cfg.get_int("conditions", "samples", 2000),
          cfg.get_double("conditions", "tol", 1e-9));
      row.pass = rep.pass ? 1 : 0;
      row.worst_margin = rep.worst_margin();
    } else if (action == "verify") {
      const ModelGeometry geo = build_geometry(cfg);
      const SpatialGrid grid = build_grid(cfg, geo);
      const double t_end = cfg.get_double("solve", "t_end", 1.0);
      const double K = resolve_curvature_bound(cfg, geo, t_end);
      const ParamTriple triple = build_triple(cfg, K);
      RunContext ctx;
      ctx.seed = cfg.get_u64("run", "seed", 1);
      const SolutionField field = solve_from_config(cfg, ctx, geo, grid);
      const TimeWindow win = window_from(cfg, "verify", t_end);
      const auto names = cfg.get_list("verify", "theorems");
      if (names.empty()) throw ConfigError("[verify] theorems list is empty");
      double worst = std::numeric_limits<double>::infinity();
      std::size_t violations = 0;
      for (const auto& name : names) {
        const auto th = theorem_from_string(name);
        if (!th) throw ConfigError("unknown theorem '" + name + "'");
        EstimateInstance inst = EstimateInstance::for_field(
            *th, field, triple, K, cfg.get_double("verify", "C", 1.0));
        const EstimateReport rep =
            verify(field, inst, make_global_region(field, win.lo, win.hi));
        violations += rep.violations;
        worst = std::min(worst, rep.worst_margin);
      }
      row.pass = violations == 0 ? 1 : 0;
      row.violations = violations;
      row.worst_margin = worst;
    } else {
      throw ConfigError("unknown sweep action '" + action + "'");
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    row.pass = 0;
  }
  return row;
}

}  // namespace

int cmd_sweep(const ExperimentConfig& cfg, const CliOverrides& ov) {
  RunContext ctx;
  int exit_code = kExitOk;
  try {
    ctx = begin_run(cfg, ov);
    const std::string action = cfg.get("sweep", "action", "check-conditions");
    const std::vector<std::string> axes = {"mu", "theta", "alpha", "K", "nodes"};
    std::vector<std::pair<std::string, std::vector<double>>> lists;
    for (const auto& a : axes) {
      auto vals = cfg.get_double_list("sweep", a);
      if (!vals.empty()) lists.emplace_back(a, std::move(vals));
    }

    std::vector<SweepCell> cells;
    if (!lists.empty()) {
      cells.emplace_back();
      for (const auto& [name, values] : lists) {
        std::vector<SweepCell> next;
        for (const auto& cell : cells)
          for (double v : values) {
            SweepCell c = cell;
            c.params.emplace_back(name, v);
            next.push_back(std::move(c));
          }
        cells = std::move(next);
      }
    }

    std::vector<SweepRow> rows(cells.size());
    const int jobs = std::max(1, ov.jobs);
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= cells.size()) return;
        rows[i] = run_cell(cfg, cells[i], action);
        std::string vals;
        for (const auto& [k, v] : cells[i].params) {
          if (!vals.empty()) vals += ',';
          vals += fmt17(v);
        }
        rows[i].values = vals;
      }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ofstream csv(ctx.out_dir / "sweep.csv", std::ios::binary);
    csv << "cell";
    for (const auto& [name, values] : lists) csv << ',' << name;
    csv << ",pass,violations,worst_margin,error\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv << i;
      if (!rows[i].values.empty()) csv << ',' << rows[i].values;
      csv << ',' << rows[i].pass << ',' << rows[i].violations << ','
          << fmt17(rows[i].worst_margin) << ',' << rows[i].error << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    exit_code = kExitConfig;
  }
  if (!ctx.out_dir.empty()) write_manifest(ctx, cfg, "sweep", exit_code);
  return exit_code;
}

}  // namespace hlab
