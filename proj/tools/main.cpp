#include <csignal>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casimir_sc/cli.hpp"
#include "casimir_sc/errors.hpp"

namespace {

extern "C" void on_sigint(int) { casimir_sc::cancel_flag().store(true); }

struct FlagBinding {
  const char* flag;
  const char* key;
  const char* help;
};

// Flags that mirror configuration keys; applied after the config file.
const std::vector<FlagBinding> kFlags = {
    {"--gap-nm", "gap_nm", "Separation d (nm)"},
    {"--radius-um", "radius_um", "Sphere radius R (um)"},
    {"--field-oe", "field_oe", "Applied field H (Oe)"},
    {"--temperature-k", "temperature_k", "Temperature (K); default T'_c(H)"},
    {"--rrr-pb", "rrr_pb", "Residual resistance ratio of Pb"},
    {"--rrr-au", "rrr_au", "Residual resistance ratio of Au"},
    {"--rel-tol", "rel_tol", "Quadrature and series relative tolerance"},
    {"--output", "output", "Output file (default stdout)"},
    {"--format", "format", "csv or json"},
    {"--start", "sweep_start", "Sweep start"},
    {"--stop", "sweep_stop", "Sweep stop"},
    {"--points", "sweep_points", "Sweep points"},
    {"--h-oe", "modulation_h_oe", "Modulation amplitude h (Oe)"},
    {"--frequency-hz", "modulation_frequency_hz", "Modulation frequency (Hz)"},
    {"--samples", "waveform_samples", "Waveform samples per period"},
    {"--t-over-tc", "g_t_over_tc", "Comma-separated T/T_c list for g-function"},
};

}  // namespace

int main(int argc, char** argv) {
  using namespace casimir_sc;
  CLI::App app{"Casimir force jump between an Au sphere and a Pb film across the superconducting transition"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::vector<std::string> values(kFlags.size());
  app.add_option("--config", config_path, "Flat key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "Override any configuration key (key=value), repeatable");
  for (std::size_t i = 0; i < kFlags.size(); ++i) app.add_option(kFlags[i].flag, values[i], kFlags[i].help);

  auto* field = app.add_subcommand("sweep-field", "Force jump versus applied field at T = T'_c(H)");
  auto* gap = app.add_subcommand("sweep-gap", "Force jump versus separation at fixed field");
  auto* temp = app.add_subcommand("sweep-temperature", "Force jump versus temperature at H = H_c(T)");
  auto* gfun = app.add_subcommand("g-function", "Mattis-Bardeen g(xi; T) versus xi / 2 Delta(0)");
  auto* wave = app.add_subcommand("waveform", "Force signal over one modulation period");
  auto* point = app.add_subcommand("point", "Single (T, H, d) evaluation");
  bool state_only = false;
  point->add_flag("--state-only", state_only, "Resolve the thermodynamic state without the force");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) load_config_file(cfg, config_path);
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set: expected key=value, got '" + s + "'");
      apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    for (std::size_t i = 0; i < kFlags.size(); ++i) {
      if (app.count(kFlags[i].flag) > 0) apply_setting(cfg, kFlags[i].key, values[i]);
    }
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  }

  std::signal(SIGINT, on_sigint);
  try {
    if (field->parsed() || gap->parsed() || temp->parsed()) {
      const SweepResult r = field->parsed() ? sweep_field(cfg) : gap->parsed() ? sweep_gap(cfg) : sweep_temperature(cfg);
      emit(cfg, render_sweep(cfg, r));
      return r.all_converged() ? 0 : 2;
    }
    if (gfun->parsed()) {
      // The sweep flags select the xi / 2 Delta(0) grid here.
      if (cfg.sweep_start) cfg.g_xi_min = *cfg.sweep_start;
      if (cfg.sweep_stop) cfg.g_xi_max = *cfg.sweep_stop;
      if (cfg.sweep_points) cfg.g_points = *cfg.sweep_points;
      emit(cfg, render_g_function(cfg, dump_g_function(cfg)));
      return 0;
    }
    if (wave->parsed()) {
      const WaveformResult w = sample_waveform(cfg);
      emit(cfg, render_waveform(cfg, w));
      return w.row.converged ? 0 : 2;
    }
    if (point->parsed()) {
      const PointReport p = run_point(cfg, !state_only);
      emit(cfg, render_point(cfg, p));
      return p.row.converged ? 0 : 2;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
