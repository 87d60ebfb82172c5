// simulate: run one inversion scenario, or the whole figure suite.
//
//   simulate --preset fig2 --out results/
//   simulate --config run.cfg --eta 0.03 --engine poisson_closed --out results/
//   simulate --suite --out results/
//
// Exit codes: 0 success, 2 validation error, 3 numerical-integrity error,
// 1 anything else (filesystem errors are printed verbatim).

#include "iontrap/iontrap.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::optional<double> eta;
  std::optional<double> nbar;
  std::optional<double> mbar;
  std::optional<double> gt_max;
  std::optional<std::string> engine;
};

void apply(iontrap::RunConfig& c, const Overrides& o) {
  using iontrap::ConfigError;
  using iontrap::DistributionKind;
  if (o.eta) c.eta = *o.eta;
  if (o.nbar) {
    if (c.field.kind == DistributionKind::number)
      throw ConfigError("--nbar", "field is a number state; set field.level instead");
    c.field.mean = *o.nbar;
  }
  if (o.mbar) {
    if (c.vib.kind == DistributionKind::number)
      throw ConfigError("--mbar", "vibration is a number state; set vib.level instead");
    c.vib.mean = *o.mbar;
  }
  if (o.gt_max) c.gt_max = *o.gt_max;
  if (o.engine) c.engine = iontrap::parse_engine(*o.engine, "--engine");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population inversion of a trapped ion in a cavity at carrier resonance"};
  std::string preset_name;
  std::string config_path;
  std::string out_dir;
  bool suite = false;
  Overrides o;

  auto* preset_opt = app.add_option("--preset", preset_name, "built-in preset fig1..fig7");
  auto* config_opt = app.add_option("--config", config_path, "key = value configuration file");
  auto* suite_opt = app.add_flag("--suite", suite, "run all seven presets");
  preset_opt->excludes(config_opt)->excludes(suite_opt);
  config_opt->excludes(suite_opt);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--eta", o.eta, "Lamb-Dicke parameter");
  app.add_option("--nbar", o.nbar, "mean photon number of the field");
  app.add_option("--mbar", o.mbar, "mean vibrational quanta");
  app.add_option("--gt-max", o.gt_max, "end of the scaled-time window");
  app.add_option("--engine", o.engine, "double_sum|poisson_closed|oracle_rwa|oracle_full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (suite) {
      if (out_dir.empty())
        throw iontrap::ConfigError("--out", "required");
      const auto results = iontrap::run_figure_suite(out_dir);
      for (const auto& r : results)
        std::cout << r.config.name << ": " << r.trace.size() << " samples, "
                  << r.timescales.detected_revivals.size() << " revival peaks\n";
      std::cout << "wrote " << out_dir << "/suite_report.txt\n";
      return 0;
    }

    iontrap::RunConfig config;
    if (!preset_name.empty())
      config = iontrap::preset(preset_name);
    else if (!config_path.empty())
      config = iontrap::parse_config_file(config_path);
    else
      throw iontrap::ConfigError("--preset/--config", "one of them is required");
    apply(config, o);
    if (!out_dir.empty())
      config.out_dir = out_dir;
    if (config.out_dir.empty())
      throw iontrap::ConfigError("--out", "required (or set `out` in the config)");

    const auto files = iontrap::run_scenario(config, config.out_dir);
    std::cout << "wrote " << files.trace.string() << "\n"
              << "wrote " << files.report.string() << "\n";
    return 0;
  } catch (const iontrap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const iontrap::ExpansionInvalidError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitValidation;
  } catch (const iontrap::NumericalIntegrityError& e) {
    std::cerr << "numerical integrity error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const iontrap::TruncationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::logic_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
