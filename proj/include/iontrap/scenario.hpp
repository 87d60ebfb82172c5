#pragma once

// Scenario runner behind the `simulate` tool: run configuration, the
// built-in figure presets, CSV traces and the timescale report.

#include "iontrap/closed_form.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/fock.hpp"
#include "iontrap/hamiltonian.hpp"
#include "iontrap/oracle.hpp"
#include "iontrap/timescales.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace iontrap {

enum class Engine { double_sum, poisson_closed, oracle_rwa, oracle_full };

inline std::string_view to_string(Engine e) {
  switch (e) {
  case Engine::double_sum: return "double_sum";
  case Engine::poisson_closed: return "poisson_closed";
  case Engine::oracle_rwa: return "oracle_rwa";
  case Engine::oracle_full: return "oracle_full";
  }
  return "double_sum";
}

// Oracle runs default to a coarser space than the closed-form engines.
inline constexpr int kOracleFieldCutoff = 40;
inline constexpr int kOracleVibCutoff = 15;
inline constexpr double kOracleTailTol = 1e-2;
inline constexpr int kOracleMaxDim = 4000;

struct RunConfig {
  std::string name = "scenario";
  StateSpec field{DistributionKind::coherent, 0.0, 0};
  StateSpec vib{DistributionKind::coherent, 0.0, 0};
  double eta = 0.0;
  double gt_max = 0.0;
  std::optional<double> gt_step;  // empty: automatic
  Engine engine = Engine::double_sum;
  std::optional<int> n_field;
  std::optional<int> n_vib;
  std::optional<double> tail_tol;
  double nu = 50.0;
  double omega = 500.0;
  double omega0 = 500.0;
  std::optional<double> envelope_window;
  int revival_orders = 3;
  std::string out_dir;

  bool uses_oracle() const {
    return engine == Engine::oracle_rwa || engine == Engine::oracle_full;
  }

  double effective_tail_tol() const {
    return tail_tol.value_or(uses_oracle() ? kOracleTailTol : kDefaultTailTol);
  }

  SystemParams params() const {
    SystemParams p;
    p.eta = eta;
    p.nu = nu;
    p.omega = omega;
    p.omega0 = omega0;
    return p;
  }
};

namespace detail {

inline void validate_state(const StateSpec& s, const std::string& prefix) {
  if (s.kind == DistributionKind::custom)
    throw ConfigError(prefix + ".kind", "custom distributions are not configurable");
  if (s.kind == DistributionKind::number) {
    if (s.level < 0)
      throw ConfigError(prefix + ".level", "must be >= 0");
  } else if (!(s.mean >= 0.0) || !std::isfinite(s.mean)) {
    throw ConfigError(prefix + ".mean", "must be a finite value >= 0");
  }
}

} // namespace detail

/// Throws ConfigError naming the offending key, or ExpansionInvalidError
/// when eta^2 (1 + 2 mbar)/2 >= 1.
inline void validate(const RunConfig& c) {
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("name", "must be a non-empty file stem");
  detail::validate_state(c.field, "field");
  detail::validate_state(c.vib, "vib");
  if (!(c.eta >= 0.0) || !std::isfinite(c.eta))
    throw ConfigError("eta", "must be a finite value >= 0");
  if (!(c.gt_max > 0.0) || !std::isfinite(c.gt_max))
    throw ConfigError("gt_max", "must be > 0");
  if (c.gt_step && !(*c.gt_step > 0.0))
    throw ConfigError("gt_step", "must be > 0 or auto");
  if (c.engine == Engine::poisson_closed && c.vib.kind != DistributionKind::coherent)
    throw ConfigError("engine", "poisson_closed needs a coherent vibrational state");
  if (c.n_field && *c.n_field < 0)
    throw ConfigError("trunc.n_field", "must be >= 0");
  if (c.n_vib && *c.n_vib < 0)
    throw ConfigError("trunc.n_vib", "must be >= 0");
  if (c.tail_tol && !(*c.tail_tol > 0.0 && *c.tail_tol < 1.0))
    throw ConfigError("trunc.tail_tol", "must lie in (0, 1)");
  if (!(c.nu > 0.0)) throw ConfigError("nu", "must be > 0");
  if (!(c.omega > 0.0)) throw ConfigError("omega", "must be > 0");
  if (!(c.omega0 > 0.0)) throw ConfigError("omega0", "must be > 0");
  if (c.envelope_window && !(*c.envelope_window > 0.0))
    throw ConfigError("envelope_window", "must be > 0");
  if (c.revival_orders < 1)
    throw ConfigError("revival_orders", "must be >= 1");
  if (c.engine == Engine::oracle_rwa && c.omega0 != c.omega)
    throw ConfigError("omega0", "oracle_rwa needs omega0 == omega");
  const double mbar = c.vib.nominal_mean();
  if (!(c.eta * c.eta * (1.0 + 2.0 * mbar) / 2.0 < 1.0))
    throw ExpansionInvalidError(
        "eta^2 (1 + 2 mbar)/2 >= 1: the effective coupling "
        "1 - eta^2 (1 + 2 mbar)/2 is not positive, so the second-order "
        "expansion of cos eta(a + a^dagger) does not hold");
}

/// Built-in parameter sets fig1..fig7 (coherent field and vibration, atom
/// excited). Unknown names throw ConfigError on "preset".
inline RunConfig preset(std::string_view name) {
  struct Row {
    std::string_view name;
    double nbar, mbar, eta, gt_max;
  };
  static constexpr std::array<Row, 7> rows{{
      {"fig1", 0.0, 4.0, 0.05, 1600.0},
      {"fig2", 25.0, 4.0, 0.02, 60.0},
      {"fig3", 25.0, 4.0, 0.04, 60.0},
      {"fig4", 25.0, 4.0, 0.02, 2000.0},
      {"fig5", 25.0, 4.0, 0.04, 2000.0},
      {"fig6", 1.69, 10.24, 0.2, 80.0},
      {"fig7", 16.0, 16.0, 0.05, 60.0},
  }};
  for (const Row& r : rows)
    if (r.name == name) {
      RunConfig c;
      c.name = std::string(r.name);
      c.field = {DistributionKind::coherent, r.nbar, 0};
      c.vib = {DistributionKind::coherent, r.mbar, 0};
      c.eta = r.eta;
      c.gt_max = r.gt_max;
      return c;
    }
  throw ConfigError("preset", "unknown preset '" + std::string(name) +
                                  "' (expected fig1..fig7)");
}

inline std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
}

// ---------------------------------------------------------------------------
// Config file: `key = value` lines, '#' starts a comment.

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

inline int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

inline DistributionKind parse_kind(const std::string& key, const std::string& v) {
  if (v == "coherent") return DistributionKind::coherent;
  if (v == "number") return DistributionKind::number;
  if (v == "thermal") return DistributionKind::thermal;
  throw ConfigError(key, "expected coherent|number|thermal, got '" + v + "'");
}

} // namespace detail

inline Engine parse_engine(const std::string& v, const std::string& key = "engine") {
  if (v == "double_sum") return Engine::double_sum;
  if (v == "poisson_closed") return Engine::poisson_closed;
  if (v == "oracle_rwa") return Engine::oracle_rwa;
  if (v == "oracle_full") return Engine::oracle_full;
  throw ConfigError(key, "expected double_sum|poisson_closed|oracle_rwa|oracle_full, got '" +
                             v + "'");
}

/// Applies one `key = value` setting to `c`.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "preset") c = preset(value);
  else if (key == "name") c.name = value;
  else if (key == "field.kind") c.field.kind = parse_kind(key, value);
  else if (key == "field.mean") c.field.mean = parse_double(key, value);
  else if (key == "field.level") c.field.level = parse_int(key, value);
  else if (key == "vib.kind") c.vib.kind = parse_kind(key, value);
  else if (key == "vib.mean") c.vib.mean = parse_double(key, value);
  else if (key == "vib.level") c.vib.level = parse_int(key, value);
  else if (key == "eta") c.eta = parse_double(key, value);
  else if (key == "gt_max") c.gt_max = parse_double(key, value);
  else if (key == "gt_step")
    c.gt_step = value == "auto" ? std::nullopt : std::optional(parse_double(key, value));
  else if (key == "engine") c.engine = parse_engine(value, key);
  else if (key == "trunc.n_field") c.n_field = parse_int(key, value);
  else if (key == "trunc.n_vib") c.n_vib = parse_int(key, value);
  else if (key == "trunc.tail_tol") c.tail_tol = parse_double(key, value);
  else if (key == "nu") c.nu = parse_double(key, value);
  else if (key == "omega") c.omega = parse_double(key, value);
  else if (key == "omega0") c.omega0 = parse_double(key, value);
  else if (key == "envelope_window") c.envelope_window = parse_double(key, value);
  else if (key == "revival_orders") c.revival_orders = parse_int(key, value);
  else if (key == "out") c.out_dir = value;
  else throw ConfigError(key, "unknown key");
}

/// Parses config text. A `preset = figN` line resets everything set
/// before it, so it normally comes first.
inline RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno), "empty key");
    apply_setting(c, key, value);
  }
  return c;
}

inline RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config", "cannot open " + path.string());
  return parse_config(in);
}

// ---------------------------------------------------------------------------
// Execution

struct ScenarioResult {
  RunConfig config;
  TruncationSpec trunc;
  double field_tail = 0.0;
  double vib_tail = 0.0;
  InversionTrace trace;
  TimescaleReport timescales;
  double envelope_window = 0.0;
  std::string detection_note;  // empty when detection ran
  double wall_seconds = 0.0;
};

namespace detail {

inline TruncationSpec resolve_truncation(const RunConfig& c) {
  const double tol = c.effective_tail_tol();
  int nf = 0;
  int nv = 0;
  if (c.uses_oracle()) {
    nf = c.n_field.value_or(kOracleFieldCutoff);
    nv = c.n_vib.value_or(kOracleVibCutoff);
  } else {
    nf = c.n_field.value_or(default_cutoff(c.field, tol));
    nv = c.n_vib.value_or(default_cutoff(c.vib, tol));
  }
  if (c.field.kind == DistributionKind::number && c.field.level > nf)
    throw ConfigError("field.level", "exceeds trunc.n_field");
  if (c.vib.kind == DistributionKind::number && c.vib.level > nv)
    throw ConfigError("vib.level", "exceeds trunc.n_vib");
  return {nf, nv, tol};
}

inline double fastest_rabi(const TruncationSpec& t, double eta) {
  const double k = std::max(std::abs(effective_coupling(eta, 0)),
                            std::abs(effective_coupling(eta, t.n_vib)));
  return k * std::sqrt(t.n_field + 1.0);
}

} // namespace detail

/// Runs one scenario in memory. Validation failures throw before any work.
inline ScenarioResult simulate(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  ScenarioResult r;
  r.config = config;
  r.trunc = detail::resolve_truncation(config);
  const double tol = r.trunc.tail_tol;
  ModeDistribution field0 = make_populations(config.field, r.trunc.n_field, tol);
  ModeDistribution vib0 = make_populations(config.vib, r.trunc.n_vib, tol);
  r.field_tail = field0.tail_mass();
  r.vib_tail = vib0.tail_mass();

  const double step =
      config.gt_step.value_or(default_step(detail::fastest_rabi(r.trunc, config.eta)));
  const std::vector<double> grid = uniform_grid(config.gt_max, step);

  switch (config.engine) {
  case Engine::double_sum:
    r.trace = inversion_double_sum(field0, vib0, config.eta, grid);
    break;
  case Engine::poisson_closed:
    r.trace = inversion_poisson_closed(field0, config.vib.mean, config.eta, grid);
    break;
  case Engine::oracle_rwa:
  case Engine::oracle_full: {
    // one spare field level so the top populated doublet stays inside
    const TruncationSpec space(r.trunc.n_field + 1, r.trunc.n_vib, tol);
    const TripartiteDims dims(space);
    if (dims.size() > kOracleMaxDim)
      throw ConfigError("trunc", "oracle dimension " + std::to_string(dims.size()) +
                                     " exceeds " + std::to_string(kOracleMaxDim));
    const SystemParams params = config.params();
    const bool rwa = config.engine == Engine::oracle_rwa;
    const TripartiteOperator h = rwa ? build_carrier_rwa_interaction(params, space)
                                     : build_full_hamiltonian(params, space);
    const SpectralPropagator prop =
        diagonalize(h, rwa ? HamiltonianSource::rwa_h : HamiltonianSource::full_h);
    r.trace = oracle_inversion_trace(prop, initial_density(field0, vib0, dims), grid);
    break;
  }
  }
  check_inversion_bounds(r.trace);

  const double nbar = config.field.nominal_mean();
  const double mbar = config.vib.nominal_mean();
  r.timescales = predict_timescales(nbar, mbar, config.eta, config.revival_orders);
  r.envelope_window =
      config.envelope_window.value_or(default_envelope_window(nbar, mbar, config.eta));
  try {
    r.timescales.detected_revivals = detect_revivals(r.trace, r.envelope_window);
  } catch (const ResolutionError& e) {
    r.detection_note = e.what();
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------
// Output

/// `%.12g`-style rendering, independent of the C locale.
inline std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

/// CSV body: header `gt,W` and one LF-terminated row per sample.
inline std::string trace_csv(const InversionTrace& trace) {
  std::string out = "gt,W\n";
  out.reserve(trace.size() * 32 + 8);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out += format_number(trace.times[k]);
    out += ',';
    out += format_number(trace.values[k]);
    out += '\n';
  }
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::filesystem::filesystem_error(
        "cannot open for writing", path,
        std::make_error_code(std::errc::io_error));
  out << body;
  if (!out)
    throw std::filesystem::filesystem_error(
        "write failed", path, std::make_error_code(std::errc::io_error));
}

inline nlohmann::json config_json(const RunConfig& c, const TruncationSpec& t) {
  auto state = [](const StateSpec& s) {
    nlohmann::json j{{"kind", std::string(to_string(s.kind))}};
    if (s.kind == DistributionKind::number) j["level"] = s.level;
    else j["mean"] = s.mean;
    return j;
  };
  nlohmann::json j{{"name", c.name},
                   {"field", state(c.field)},
                   {"vib", state(c.vib)},
                   {"eta", c.eta},
                   {"gt_max", c.gt_max},
                   {"engine", std::string(to_string(c.engine))},
                   {"trunc", {{"n_field", t.n_field}, {"n_vib", t.n_vib}, {"tail_tol", t.tail_tol}}}};
  j["gt_step"] = c.gt_step ? nlohmann::json(*c.gt_step) : nlohmann::json("auto");
  if (c.engine == Engine::oracle_full)
    j["frequencies"] = {{"nu", c.nu}, {"omega", c.omega}, {"omega0", c.omega0}};
  return j;
}

inline nlohmann::json result_json(const ScenarioResult& r) {
  const TimescaleReport& ts = r.timescales;
  nlohmann::json peaks = nlohmann::json::array();
  for (const RevivalPeak& p : ts.detected_revivals)
    peaks.push_back({{"gt", p.gt_center}, {"peak", p.peak}});
  nlohmann::json j{{"config", config_json(r.config, r.trunc)},
                   {"samples", r.trace.size()},
                   {"gt_step", r.trace.size() > 1 ? r.trace.times[1] - r.trace.times[0] : 0.0},
                   {"retained_mass", r.trace.retained_mass},
                   {"tail_mass", {{"field", r.field_tail}, {"vib", r.vib_tail}}},
                   {"tail_bound", r.trace.tail_bound},
                   {"predictions",
                    {{"field_revivals", ts.field_revivals},
                     {"vib_revivals", ts.vib_revivals},
                     {"field_collapse", ts.field_collapse}}},
                   {"envelope_window", r.envelope_window},
                   {"detected_revivals", peaks}};
  j["predictions"]["vib_collapse"] =
      ts.vib_collapse ? nlohmann::json(*ts.vib_collapse) : nlohmann::json(nullptr);
  if (!r.detection_note.empty())
    j["detection_note"] = r.detection_note;
  return j;
}

namespace detail {

inline std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += format_number(xs[i]);
  }
  return s.empty() ? "none" : s;
}

} // namespace detail

/// Human-readable key-value report followed by a [machine] JSON line.
inline std::string scenario_report(const ScenarioResult& r) {
  const RunConfig& c = r.config;
  const TimescaleReport& ts = r.timescales;
  std::ostringstream o;
  o << "# inversion report: " << c.name << "\n";
  o << "engine = " << to_string(c.engine) << "\n";
  o << "field = " << to_string(c.field.kind) << " "
    << format_number(c.field.nominal_mean()) << "\n";
  o << "vib = " << to_string(c.vib.kind) << " " << format_number(c.vib.nominal_mean())
    << "\n";
  o << "eta = " << format_number(c.eta) << "\n";
  o << "gt_max = " << format_number(c.gt_max) << "\n";
  o << "gt_window = [0, " << format_number(c.gt_max)
    << "] (window fixed by the run configuration)\n";
  o << "samples = " << r.trace.size() << "\n";
  o << "truncation = n_field " << r.trunc.n_field << ", n_vib " << r.trunc.n_vib
    << ", tail_tol " << format_number(r.trunc.tail_tol) << "\n";
  o << "tail_mass.field = " << format_number(r.field_tail) << "\n";
  o << "tail_mass.vib = " << format_number(r.vib_tail) << "\n";
  o << "retained_mass = " << format_number(r.trace.retained_mass) << "\n";
  o << "\n[predictions]\n";
  o << "field_revival_gt = " << detail::join(ts.field_revivals) << "\n";
  o << "vib_revival_gt = " << detail::join(ts.vib_revivals) << "\n";
  o << "field_collapse_gt = " << format_number(ts.field_collapse) << "\n";
  o << "vib_collapse_gt = "
    << (ts.vib_collapse ? format_number(*ts.vib_collapse) : std::string("none")) << "\n";
  o << "\n[detected_revivals]\n";
  o << "envelope_window = " << format_number(r.envelope_window) << "\n";
  if (!r.detection_note.empty())
    o << "note = " << r.detection_note << "\n";
  for (const RevivalPeak& p : ts.detected_revivals)
    o << "peak = gt " << format_number(p.gt_center) << ", envelope "
      << format_number(p.peak) << "\n";
  o << "\nwall_seconds = " << format_number(r.wall_seconds) << "\n";
  o << "\n[machine]\n" << result_json(r).dump() << "\n";
  return o.str();
}

struct ScenarioFiles {
  std::filesystem::path trace;
  std::filesystem::path report;
};

/// Simulates and writes `<out>/<name>.csv` and `<out>/<name>.report.txt`.
/// Nothing is written when validation or the simulation fails.
inline ScenarioFiles run_scenario(const RunConfig& config,
                                  const std::filesystem::path& out_dir) {
  const ScenarioResult r = simulate(config);
  std::filesystem::create_directories(out_dir);
  ScenarioFiles files{out_dir / (config.name + ".csv"),
                      out_dir / (config.name + ".report.txt")};
  write_file(files.trace, trace_csv(r.trace));
  write_file(files.report, scenario_report(r));
  return files;
}

struct SuiteRow {
  std::string name;
  double predicted;
  double detected;  // nearest detected peak, NaN if none
  double envelope;  // envelope maximum within +-10 % of the prediction
};

namespace detail {

inline double nearest_peak(const std::vector<RevivalPeak>& peaks, double target) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const RevivalPeak& p : peaks)
    if (std::isnan(best) || std::abs(p.gt_center - target) < std::abs(best - target))
      best = p.gt_center;
  return best;
}

} // namespace detail

/// Runs fig1..fig7 with their default grids, writes one CSV per preset and
/// `suite_report.txt` cross-tabulating predicted against detected times.
inline std::vector<ScenarioResult> run_figure_suite(const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<ScenarioResult> results;
  for (const std::string& name : preset_names())
    results.push_back(simulate(preset(name)));

  std::filesystem::create_directories(out_dir);
  std::ostringstream o;
  nlohmann::json machine = nlohmann::json::array();
  o << "# figure suite report\n";
  o << "# columns: preset, timescale, predicted gt, nearest detected peak gt, "
       "envelope max within +-10%\n";
  for (const ScenarioResult& r : results) {
    write_file(out_dir / (r.config.name + ".csv"), trace_csv(r.trace));
    const TimescaleReport& ts = r.timescales;
    o << "\n[" << r.config.name << "]\n";
    o << "params = nbar " << format_number(r.config.field.mean) << ", mbar "
      << format_number(r.config.vib.mean) << ", eta " << format_number(r.config.eta)
      << ", gt_max " << format_number(r.config.gt_max) << "\n";
    o << "tail_mass = field " << format_number(r.field_tail) << ", vib "
      << format_number(r.vib_tail) << "\n";
    nlohmann::json entry = result_json(r);
    auto row = [&](const std::string& label, double predicted) {
      const double peak = detail::nearest_peak(ts.detected_revivals, predicted);
      double env = std::numeric_limits<double>::quiet_NaN();
      if (predicted > 0.0 && predicted <= r.config.gt_max * 1.1 && r.detection_note.empty())
        env = envelope_peak_near(r.trace, r.envelope_window, predicted);
      o << label << " = predicted " << format_number(predicted) << ", detected "
        << (std::isnan(peak) ? std::string("none") : format_number(peak)) << ", envelope "
        << (std::isnan(env) ? std::string("n/a") : format_number(env)) << "\n";
      entry["cross"][label] = {{"predicted", predicted},
                               {"detected", std::isnan(peak) ? nlohmann::json(nullptr)
                                                             : nlohmann::json(peak)},
                               {"envelope", std::isnan(env) ? nlohmann::json(nullptr)
                                                            : nlohmann::json(env)}};
    };
    row("field_revival", ts.field_revivals.front());
    if (!ts.vib_revivals.empty()) row("vib_revival", ts.vib_revivals.front());
    o << "field_collapse = " << format_number(ts.field_collapse) << "\n";
    o << "vib_collapse = "
      << (ts.vib_collapse ? format_number(*ts.vib_collapse) : std::string("none")) << "\n";
    o << "detected_peaks = " << ts.detected_revivals.size() << "\n";
    machine.push_back(std::move(entry));
  }

  // relative suppression of the short-time revival against fig2
  const double t2 = results[1].timescales.field_revivals.front();
  const double ref = envelope_peak_near(results[1].trace, results[1].envelope_window, t2);
  auto ratio = [&](const ScenarioResult& r) {
    const double t = r.timescales.field_revivals.front();
    return envelope_peak_near(r.trace, r.envelope_window, t) / ref;
  };
  o << "\n[comparisons]\n";
  o << "fig3_over_fig2_revival_envelope = " << format_number(ratio(results[2])) << "\n";
  o << "fig7_over_fig2_revival_envelope = " << format_number(ratio(results[6])) << "\n";
  const ScenarioResult& f7 = results[6];
  o << "fig7_vib_collapse_before_field_revival = "
    << (f7.timescales.vib_collapse && *f7.timescales.vib_collapse <
                                          f7.timescales.field_revivals.front()
            ? "true"
            : "false")
    << "\n";
  o << "\nwall_seconds = "
    << format_number(
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count())
    << "\n";
  o << "\n[machine]\n" << machine.dump() << "\n";
  write_file(out_dir / "suite_report.txt", o.str());
  return results;
}

} // namespace iontrap
