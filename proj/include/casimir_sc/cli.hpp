#pragma once

// Command-line driver: configuration, sweeps, figure data and output writers.

#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casimir_sc/lifshitz.hpp"
#include "casimir_sc/materials.hpp"
#include "casimir_sc/sc_state.hpp"

namespace casimir_sc {

inline constexpr const char* kVersion = "0.1.0";

enum class SweepVariable { field_oe, gap_nm, temperature_k };
enum class OutputFormat { csv, json };

struct SweepSpec {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
};

struct RunConfig {
  MaterialParams au = gold();
  MaterialParams pb = lead();
  double radius_um = 150.0;
  double gap_nm = 70.0;
  double field_oe = 200.0;
  // Unset: T = shifted_tc(field_oe).
  std::optional<double> temperature_k;
  // Unset fields take the per-subcommand defaults.
  std::optional<double> sweep_start;
  std::optional<double> sweep_stop;
  std::optional<int> sweep_points;
  EngineConfig engine;
  std::string output;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  // waveform
  double modulation_h_oe = 20.0;
  double modulation_frequency_hz = 1.0;
  int waveform_samples = 4;
  // g-function
  std::vector<double> g_t_over_tc = {0.1, 0.9};
  double g_xi_min = 0.01;  // units of 2 Delta(0)
  double g_xi_max = 100.0;
  int g_points = 81;
};

// Sets one key from its textual value. Throws ConfigError on unknown keys or
// unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
// Flat key=value file; '#' starts a comment. Errors carry the line number.
void load_config_file(RunConfig& cfg, const std::string& path);
RunConfig load_config(const std::string& path);
// Every key accepted by apply_setting.
const std::vector<std::string>& config_keys();

// Resolved sweep range for a variable, applying the defaults.
SweepSpec resolve_sweep(const RunConfig& cfg, SweepVariable var);
// Throws ConfigError naming the offending field.
void validate(const RunConfig& cfg);
void validate_sweep(const RunConfig& cfg, SweepVariable var);
// T used by point and gap sweeps.
double operating_temperature(const RunConfig& cfg);

// Ordered key/value echo of the resolved configuration.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg);

// Shortest round-trip scientific notation.
std::string format_double(double v);

struct SweepRow {
  double x = 0.0;
  double t_prime_c_K = 0.0;
  double delta_f_fN = 0.0;
  double f_normal_eV_nm2 = 0.0;
  double f_super_eV_nm2 = 0.0;
  long terms_used = 0;
  double pfa_bound = 0.0;
  bool converged = false;
  bool computed = false;
  std::string status;  // "ok", failure message, or "not computed"
};

struct SweepResult {
  std::string command;
  std::vector<SweepRow> rows;
  std::vector<std::pair<std::string, std::string>> meta;  // extra header lines
  bool interrupted = false;

  bool all_converged() const;
};

// Worker count: CASIMIR_SC_THREADS if set, otherwise hardware concurrency.
int thread_count();
// Set asynchronously (SIGINT) to stop scheduling new rows.
std::atomic<bool>& cancel_flag();

// One row at field H (Oe), temperature T and separation d, sharing the
// Au/Pb system when one is supplied.
SweepRow compute_row(const RunConfig& cfg, double x, double T, double d, const AuPbSystem* system = nullptr);

SweepResult sweep_field(const RunConfig& cfg);
SweepResult sweep_gap(const RunConfig& cfg);
SweepResult sweep_temperature(const RunConfig& cfg);

struct PointReport {
  ThermoPoint below;  // state just below the transition at T
  double t_prime_c_K = 0.0;
  double critical_field_oe = 0.0;
  double temperature_k = 0.0;
  std::optional<double> penetration_depth_nm;
  SweepRow row;
};
// compute_force = false resolves only the thermodynamic state.
PointReport run_point(const RunConfig& cfg, bool compute_force = true);

struct GFunctionTable {
  std::vector<double> t_over_tc;
  std::vector<double> xi_over_2delta0;
  std::vector<std::vector<double>> g;  // g[column][row]
  std::vector<double> g_zero;          // g(0+) per column
};
GFunctionTable dump_g_function(const RunConfig& cfg);

struct WaveformSample {
  double t_s;
  double field_oe;
  Phase phase;
  double force_fN;
};
struct WaveformResult {
  ModulationSpec spec;
  ForceSignal signal;
  std::vector<WaveformSample> samples;
  SweepRow row;
};
// n_samples midpoints t_i = (i + 1/2) period / n over one period.
WaveformResult sample_waveform(const RunConfig& cfg);

std::string render_sweep(const RunConfig& cfg, const SweepResult& r);
std::string render_point(const RunConfig& cfg, const PointReport& p);
std::string render_g_function(const RunConfig& cfg, const GFunctionTable& t);
std::string render_waveform(const RunConfig& cfg, const WaveformResult& w);

// Writes to cfg.output or stdout.
void emit(const RunConfig& cfg, const std::string& text);

}  // namespace casimir_sc
