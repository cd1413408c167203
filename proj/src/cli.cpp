#include "casimir_sc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "casimir_sc/constants.hpp"
#include "casimir_sc/errors.hpp"

namespace casimir_sc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError(key + ": expected a comma-separated list of numbers");
  return out;
}

// Shortest round-trip, plain or scientific, for labels.
std::string short_label(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  auto num = [](double RunConfig::*field) {
    return Setter([field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_double(k, v); });
  };
  auto mat = [](MaterialParams RunConfig::*m, double MaterialParams::*field) {
    return Setter(
        [m, field](RunConfig& c, const std::string& k, const std::string& v) { (c.*m).*field = parse_double(k, v); });
  };
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"gap_nm", num(&RunConfig::gap_nm)},
      {"radius_um", num(&RunConfig::radius_um)},
      {"field_oe", num(&RunConfig::field_oe)},
      {"temperature_k",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (trim(v) == "auto") {
           c.temperature_k.reset();
         } else {
           c.temperature_k = parse_double(k, v);
         }
       }},
      {"rrr_au", mat(&RunConfig::au, &MaterialParams::rrr)},
      {"rrr_pb", mat(&RunConfig::pb, &MaterialParams::rrr)},
      {"au_omega_p", mat(&RunConfig::au, &MaterialParams::omega_p)},
      {"au_gamma0", mat(&RunConfig::au, &MaterialParams::gamma0)},
      {"pb_omega_p", mat(&RunConfig::pb, &MaterialParams::omega_p)},
      {"pb_gamma0", mat(&RunConfig::pb, &MaterialParams::gamma0)},
      {"pb_tc", mat(&RunConfig::pb, &MaterialParams::tc)},
      {"pb_hc0", mat(&RunConfig::pb, &MaterialParams::hc0)},
      {"pb_lambda0",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.pb.lambda0 = parse_double(k, v); }},
      {"rel_tol",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.engine.rel_tol_quadrature = c.engine.rel_tol_series = parse_double(k, v);
       }},
      {"rel_tol_quadrature",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.engine.rel_tol_quadrature = parse_double(k, v); }},
      {"rel_tol_series",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.engine.rel_tol_series = parse_double(k, v); }},
      {"matsubara_cap_full",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.engine.matsubara_cap_full = parse_double(k, v); }},
      {"matsubara_cap_diff",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.engine.matsubara_cap_diff = parse_double(k, v); }},
      {"quadrature",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "gk15") {
           c.engine.rule = QuadratureRule::gauss_kronrod_15;
         } else if (t == "gk21") {
           c.engine.rule = QuadratureRule::gauss_kronrod_21;
         } else {
           throw ConfigError(k + ": expected gk15 or gk21, got '" + v + "'");
         }
       }},
      {"output", [](RunConfig& c, const std::string&, const std::string& v) { c.output = trim(v); }},
      {"format",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "csv") {
           c.format = OutputFormat::csv;
         } else if (t == "json") {
           c.format = OutputFormat::json;
         } else {
           throw ConfigError(k + ": expected csv or json, got '" + v + "'");
         }
       }},
      {"sweep_start", [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep_start = parse_double(k, v); }},
      {"sweep_stop", [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep_stop = parse_double(k, v); }},
      {"sweep_points", [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep_points = parse_int(k, v); }},
      {"modulation_h_oe", num(&RunConfig::modulation_h_oe)},
      {"modulation_frequency_hz", num(&RunConfig::modulation_frequency_hz)},
      {"waveform_samples",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.waveform_samples = parse_int(k, v); }},
      {"g_t_over_tc", [](RunConfig& c, const std::string& k, const std::string& v) { c.g_t_over_tc = parse_list(k, v); }},
      {"g_xi_min", num(&RunConfig::g_xi_min)},
      {"g_xi_max", num(&RunConfig::g_xi_max)},
      {"g_points", [](RunConfig& c, const std::string& k, const std::string& v) { c.g_points = parse_int(k, v); }},
  };
  return table;
}

std::string rule_name(QuadratureRule r) { return r == QuadratureRule::gauss_kronrod_15 ? "gk15" : "gk21"; }

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::vector<double> linear_grid(const SweepSpec& s) {
  std::vector<double> x(static_cast<std::size_t>(s.points));
  for (int i = 0; i < s.points; ++i) {
    x[static_cast<std::size_t>(i)] =
        i == s.points - 1 ? s.stop : s.start + (s.stop - s.start) * static_cast<double>(i) / (s.points - 1);
  }
  return x;
}

// Computes rows in parallel; rows left unscheduled after cancellation stay
// marked "not computed".
std::vector<SweepRow> run_rows(const std::vector<double>& xs, const std::function<SweepRow(double)>& fn) {
  std::vector<SweepRow> rows(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    rows[i].x = xs[i];
    rows[i].status = "not computed";
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      if (cancel_flag().load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= xs.size()) return;
      rows[i] = fn(xs[i]);
    }
  };
  const int n = std::max(1, std::min<int>(thread_count(), static_cast<int>(xs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

SweepRow failed_row(double x, double T, double d, double radius_um, const std::string& why) {
  SweepRow row;
  row.x = x;
  row.t_prime_c_K = T;
  row.delta_f_fN = row.f_normal_eV_nm2 = row.f_super_eV_nm2 = kNaN;
  row.terms_used = -1;
  row.pfa_bound = d / (radius_um * 1e3);
  row.computed = true;
  row.converged = false;
  row.status = "failed: " + why;
  std::replace(row.status.begin(), row.status.end(), '\n', ' ');
  return row;
}

void sweep_meta(SweepResult& r, SweepVariable var, const SweepSpec& s) {
  const char* names[] = {"field_oe", "gap_nm", "temperature_k"};
  r.meta.emplace_back("sweep_variable", names[static_cast<int>(var)]);
  r.meta.emplace_back("sweep_start", format_double(s.start));
  r.meta.emplace_back("sweep_stop", format_double(s.stop));
  r.meta.emplace_back("sweep_points", std::to_string(s.points));
}

void finish(SweepResult& r) { r.interrupted = cancel_flag().load(); }

std::string header_block(const std::string& command, const RunConfig& cfg,
                         const std::vector<std::pair<std::string, std::string>>& meta) {
  std::string out = std::string("# casimir-sc v") + kVersion + "\n";
  out += "# command=" + command + "\n";
  for (const auto& [k, v] : config_echo(cfg)) out += "# " + k + "=" + v + "\n";
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  return out;
}

std::vector<std::pair<std::string, std::string>> constants_meta() {
  return {{"constants", PhysConstants::version},
          {"hbar_c_eV_nm", format_double(PhysConstants::hbar_c)},
          {"k_b_eV_per_K", format_double(PhysConstants::k_b)},
          {"ev_per_nm_to_newton", format_double(PhysConstants::ev_per_nm_to_newton)}};
}

nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json json_header(const std::string& command, const RunConfig& cfg,
                                   const std::vector<std::pair<std::string, std::string>>& meta) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["command"] = command;
  nlohmann::ordered_json c = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config_echo(cfg)) c[k] = v;
  j["config"] = c;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) m[k] = v;
  j["meta"] = m;
  return j;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& [k, setter] : setters()) {
    if (k == key) {
      setter(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown key '" + key + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& entry : setters()) k.push_back(entry.first);
    return k;
  }();
  return keys;
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + "empty key");
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (!path.empty()) load_config_file(cfg, path);
  validate(cfg);
  return cfg;
}

SweepSpec resolve_sweep(const RunConfig& cfg, SweepVariable var) {
  SweepSpec s;
  switch (var) {
    case SweepVariable::field_oe: s = {25.0, 775.0, 31}; break;
    case SweepVariable::gap_nm: s = {40.0, 300.0, 27}; break;
    case SweepVariable::temperature_k: s = {0.1 * cfg.pb.tc, 0.95 * cfg.pb.tc, 18}; break;
  }
  if (cfg.sweep_start) s.start = *cfg.sweep_start;
  if (cfg.sweep_stop) s.stop = *cfg.sweep_stop;
  if (cfg.sweep_points) s.points = *cfg.sweep_points;
  return s;
}

void validate(const RunConfig& cfg) {
  auto check_material = [](const MaterialParams& m, const std::string& prefix, bool sc) {
    require(m.omega_p > 0.0, prefix + "_omega_p: must be > 0");
    require(m.gamma0 > 0.0, prefix + "_gamma0: must be > 0");
    require(m.rrr >= 1.0, "rrr_" + prefix + ": must be >= 1 (got " + format_double(m.rrr) + ")");
    if (sc) {
      require(m.tc > 0.0, prefix + "_tc: must be > 0");
      require(m.hc0 > 0.0, prefix + "_hc0: must be > 0");
      require(m.lambda0 && *m.lambda0 > 0.0, prefix + "_lambda0: must be > 0");
    }
    try {
      m.validate();
    } catch (const DomainError& e) {
      throw ConfigError(prefix + ": " + e.what());
    }
  };
  check_material(cfg.au, "au", false);
  check_material(cfg.pb, "pb", true);
  require(cfg.radius_um > 0.0, "radius_um: must be > 0");
  require(cfg.gap_nm > 10.0, "gap_nm: must be > 10 nm");
  require(cfg.field_oe >= 0.0 && cfg.field_oe < cfg.pb.hc0, "field_oe: must lie in [0, H_c(0))");
  if (cfg.temperature_k) {
    require(*cfg.temperature_k > 0.0 && *cfg.temperature_k < cfg.pb.tc, "temperature_k: must lie in (0, T_c)");
  }
  try {
    cfg.engine.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  require(cfg.modulation_h_oe > 0.0, "modulation_h_oe: must be > 0");
  require(cfg.modulation_frequency_hz > 0.0, "modulation_frequency_hz: must be > 0");
  require(cfg.waveform_samples >= 2, "waveform_samples: must be >= 2");
  for (double t : cfg.g_t_over_tc) {
    require(t > 0.0 && t < 1.0, "g_t_over_tc: " + short_label(t) +
                                    " outside (0, 1); at T_c the gap is closed and g is identically zero");
  }
  require(cfg.g_xi_min > 0.0 && cfg.g_xi_max > cfg.g_xi_min, "g_xi_min/g_xi_max: need 0 < min < max");
  require(cfg.g_points >= 2, "g_points: must be >= 2");
}

void validate_sweep(const RunConfig& cfg, SweepVariable var) {
  validate(cfg);
  const SweepSpec s = resolve_sweep(cfg, var);
  require(s.points >= 2, "sweep_points: must be >= 2");
  require(s.start < s.stop, "sweep_start/sweep_stop: need start < stop");
  switch (var) {
    case SweepVariable::field_oe:
      require(s.start >= 0.0, "sweep_start: field must be >= 0 Oe");
      require(s.stop < cfg.pb.hc0, "sweep_stop: field " + format_double(s.stop) + " Oe must be below H_c(0) = " +
                                       format_double(cfg.pb.hc0) + " Oe");
      break;
    case SweepVariable::gap_nm:
      require(s.start > 10.0, "sweep_start: gap must be > 10 nm");
      break;
    case SweepVariable::temperature_k:
      require(s.start > 0.0, "sweep_start: temperature must be > 0 K");
      require(s.stop < cfg.pb.tc, "sweep_stop: temperature must be below T_c");
      break;
  }
}

double operating_temperature(const RunConfig& cfg) {
  return cfg.temperature_k ? *cfg.temperature_k : shifted_tc(cfg.pb, cfg.field_oe);
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
  const auto f = format_double;
  return {
      {"gap_nm", f(cfg.gap_nm)},
      {"radius_um", f(cfg.radius_um)},
      {"field_oe", f(cfg.field_oe)},
      {"temperature_k", cfg.temperature_k ? f(*cfg.temperature_k) : "auto"},
      {"au_omega_p", f(cfg.au.omega_p)},
      {"au_gamma0", f(cfg.au.gamma0)},
      {"rrr_au", f(cfg.au.rrr)},
      {"pb_omega_p", f(cfg.pb.omega_p)},
      {"pb_gamma0", f(cfg.pb.gamma0)},
      {"rrr_pb", f(cfg.pb.rrr)},
      {"pb_tc", f(cfg.pb.tc)},
      {"pb_hc0", f(cfg.pb.hc0)},
      {"pb_lambda0", cfg.pb.lambda0 ? f(*cfg.pb.lambda0) : "unset"},
      {"rel_tol_quadrature", f(cfg.engine.rel_tol_quadrature)},
      {"rel_tol_series", f(cfg.engine.rel_tol_series)},
      {"matsubara_cap_full", f(cfg.engine.matsubara_cap_full)},
      {"matsubara_cap_diff", f(cfg.engine.matsubara_cap_diff)},
      {"quadrature", rule_name(cfg.engine.rule)},
      {"max_explicit_terms", std::to_string(cfg.engine.max_explicit_terms)},
      {"format", cfg.format == OutputFormat::csv ? "csv" : "json"},
  };
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  return std::string(buf, r.ptr);
}

bool SweepResult::all_converged() const {
  if (interrupted) return false;
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.computed && r.converged; });
}

int thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("CASIMIR_SC_THREADS")) {
    int cap = 0;
    const std::string s = env;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec == std::errc() && ptr == s.data() + s.size() && cap > 0) n = cap;
  }
  return n;
}

std::atomic<bool>& cancel_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

SweepRow compute_row(const RunConfig& cfg, double x, double T, double d, const AuPbSystem* system) {
  try {
    std::unique_ptr<AuPbSystem> own;
    if (!system) {
      own = std::make_unique<AuPbSystem>(cfg.au, cfg.pb, T, cfg.engine.rule);
      system = own.get();
    }
    const FreeEnergyResult fn = system->normal(d, cfg.engine);
    const FreeEnergyResult fs = system->super(d, cfg.engine);
    const PfaResult pfa = system->delta_force(cfg.radius_um, d, cfg.engine);
    SweepRow row;
    row.x = x;
    row.t_prime_c_K = T;
    row.delta_f_fN = pfa.delta_force_fN;
    row.f_normal_eV_nm2 = fn.value;
    row.f_super_eV_nm2 = fs.value;
    row.terms_used = pfa.terms_used;
    row.pfa_bound = pfa.pfa_bound;
    row.computed = true;
    row.converged = true;
    row.status = pfa.pfa_warning ? "ok (d/R >= 1e-2, PFA bound exceeded)" : "ok";
    return row;
  } catch (const NumericalFailure& e) {
    return failed_row(x, T, d, cfg.radius_um, e.what());
  } catch (const DomainError& e) {
    return failed_row(x, T, d, cfg.radius_um, e.what());
  }
}

SweepResult sweep_field(const RunConfig& cfg) {
  validate_sweep(cfg, SweepVariable::field_oe);
  const SweepSpec s = resolve_sweep(cfg, SweepVariable::field_oe);
  SweepResult r;
  r.command = "sweep-field";
  sweep_meta(r, SweepVariable::field_oe, s);
  r.rows = run_rows(linear_grid(s), [&cfg](double H) {
    return compute_row(cfg, H, shifted_tc(cfg.pb, H), cfg.gap_nm);
  });
  finish(r);
  return r;
}

SweepResult sweep_gap(const RunConfig& cfg) {
  validate_sweep(cfg, SweepVariable::gap_nm);
  const SweepSpec s = resolve_sweep(cfg, SweepVariable::gap_nm);
  SweepResult r;
  r.command = "sweep-gap";
  sweep_meta(r, SweepVariable::gap_nm, s);
  const double T = operating_temperature(cfg);
  r.meta.emplace_back("operating_temperature_k", format_double(T));
  std::unique_ptr<AuPbSystem> system;
  std::string build_error;
  try {
    system = std::make_unique<AuPbSystem>(cfg.au, cfg.pb, T, cfg.engine.rule);
  } catch (const std::exception& e) {
    build_error = e.what();
  }
  r.rows = run_rows(linear_grid(s), [&](double d) {
    if (!system) return failed_row(d, T, d, cfg.radius_um, build_error);
    return compute_row(cfg, d, T, d, system.get());
  });
  finish(r);
  return r;
}

SweepResult sweep_temperature(const RunConfig& cfg) {
  validate_sweep(cfg, SweepVariable::temperature_k);
  const SweepSpec s = resolve_sweep(cfg, SweepVariable::temperature_k);
  SweepResult r;
  r.command = "sweep-temperature";
  sweep_meta(r, SweepVariable::temperature_k, s);
  r.rows = run_rows(linear_grid(s), [&cfg](double T) { return compute_row(cfg, T, T, cfg.gap_nm); });
  finish(r);
  return r;
}

PointReport run_point(const RunConfig& cfg, bool compute_force) {
  validate(cfg);
  PointReport p;
  p.t_prime_c_K = shifted_tc(cfg.pb, cfg.field_oe);
  p.temperature_k = operating_temperature(cfg);
  p.critical_field_oe = critical_field(cfg.pb, p.temperature_k);
  // Just below the switching field at the operating temperature.
  p.below = resolve_phase(cfg.pb, p.temperature_k, std::nextafter(p.critical_field_oe, 0.0));
  if (p.temperature_k < cfg.pb.tc) p.penetration_depth_nm = penetration_depth(cfg.pb, p.temperature_k);
  if (compute_force) {
    p.row = compute_row(cfg, cfg.field_oe, p.temperature_k, cfg.gap_nm);
    p.row.t_prime_c_K = p.t_prime_c_K;
  } else {
    p.row.x = cfg.field_oe;
    p.row.t_prime_c_K = p.t_prime_c_K;
    p.row.delta_f_fN = p.row.f_normal_eV_nm2 = p.row.f_super_eV_nm2 = kNaN;
    p.row.terms_used = 0;
    p.row.pfa_bound = cfg.gap_nm / (cfg.radius_um * 1e3);
    p.row.computed = true;
    p.row.converged = true;
    p.row.status = "state only";
  }
  return p;
}

GFunctionTable dump_g_function(const RunConfig& cfg) {
  validate(cfg);
  GFunctionTable t;
  t.t_over_tc = cfg.g_t_over_tc;
  const GapModel gap(cfg.pb.tc);
  const double two_delta0 = 2.0 * gap.delta0();
  const double a = std::log10(cfg.g_xi_min);
  const double b = std::log10(cfg.g_xi_max);
  for (int i = 0; i < cfg.g_points; ++i) {
    const double e = i == cfg.g_points - 1 ? b : a + (b - a) * i / (cfg.g_points - 1);
    t.xi_over_2delta0.push_back(std::pow(10.0, e));
  }
  for (double tt : t.t_over_tc) {
    const MattisBardeenResponse resp(cfg.pb, gap, tt * cfg.pb.tc, cfg.engine.rule);
    std::vector<double> col;
    for (double x : t.xi_over_2delta0) col.push_back(resp.g(x * two_delta0));
    t.g.push_back(std::move(col));
    t.g_zero.push_back(resp.g_zero());
  }
  return t;
}

WaveformResult sample_waveform(const RunConfig& cfg) {
  validate(cfg);
  WaveformResult w;
  w.spec.base_temperature = operating_temperature(cfg);
  w.spec.h = cfg.modulation_h_oe;
  w.spec.frequency = cfg.modulation_frequency_hz;
  try {
    w.spec.validate(cfg.pb);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  w.row = compute_row(cfg, cfg.field_oe, w.spec.base_temperature, cfg.gap_nm);
  const double mean = pfa_force_fN(0.5 * (w.row.f_normal_eV_nm2 + w.row.f_super_eV_nm2), cfg.radius_um);
  w.signal = force_signal(mean, w.row.delta_f_fN, w.spec);
  const double period = w.spec.period();
  const int n = cfg.waveform_samples;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) * period / n;
    w.samples.push_back({t, field_waveform(w.spec, cfg.pb, t), waveform_phase(w.spec, cfg.pb, t), w.signal.waveform(t)});
  }
  return w;
}

std::string render_sweep(const RunConfig& cfg, const SweepResult& r) {
  auto meta = constants_meta();
  meta.insert(meta.end(), r.meta.begin(), r.meta.end());
  meta.emplace_back("interrupted", r.interrupted ? "true" : "false");
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    meta.emplace_back("row_status_" + std::to_string(i), r.rows[i].status);
  }
  if (cfg.format == OutputFormat::json) {
    nlohmann::ordered_json j = json_header(r.command, cfg, meta);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const SweepRow& row : r.rows) {
      if (!row.computed) continue;
      nlohmann::ordered_json o;
      o["x"] = json_number(row.x);
      o["t_prime_c_K"] = json_number(row.t_prime_c_K);
      o["delta_f_fN"] = json_number(row.delta_f_fN);
      o["f_normal_eV_nm2"] = json_number(row.f_normal_eV_nm2);
      o["f_super_eV_nm2"] = json_number(row.f_super_eV_nm2);
      o["terms_used"] = row.terms_used;
      o["pfa_bound"] = json_number(row.pfa_bound);
      o["converged"] = row.converged;
      o["status"] = row.status;
      rows.push_back(o);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
  }
  std::string out = header_block(r.command, cfg, meta);
  out += "x,t_prime_c_K,delta_f_fN,f_normal_eV_nm2,f_super_eV_nm2,terms_used,pfa_bound\n";
  for (const SweepRow& row : r.rows) {
    if (!row.computed) continue;
    out += format_double(row.x) + "," + format_double(row.t_prime_c_K) + "," + format_double(row.delta_f_fN) + "," +
           format_double(row.f_normal_eV_nm2) + "," + format_double(row.f_super_eV_nm2) + "," +
           (row.terms_used >= 0 ? std::to_string(row.terms_used) : "nan") + "," + format_double(row.pfa_bound) +
           "\n";
  }
  return out;
}

std::string render_point(const RunConfig& cfg, const PointReport& p) {
  SweepResult r;
  r.command = "point";
  r.meta.emplace_back("operating_temperature_k", format_double(p.temperature_k));
  r.meta.emplace_back("critical_field_oe", format_double(p.critical_field_oe));
  r.meta.emplace_back("phase_below_critical_field", phase_name(p.below.phase));
  r.meta.emplace_back("penetration_depth_nm",
                      p.penetration_depth_nm ? format_double(*p.penetration_depth_nm) : "undefined");
  r.rows.push_back(p.row);
  return render_sweep(cfg, r);
}

std::string render_g_function(const RunConfig& cfg, const GFunctionTable& t) {
  auto meta = constants_meta();
  const GapModel gap(cfg.pb.tc);
  meta.emplace_back("delta0_eV", format_double(gap.delta0()));
  for (std::size_t c = 0; c < t.t_over_tc.size(); ++c) {
    meta.emplace_back("g0_t" + short_label(t.t_over_tc[c]), format_double(t.g_zero[c]));
  }
  if (cfg.format == OutputFormat::json) {
    nlohmann::ordered_json j = json_header("g-function", cfg, meta);
    j["xi_over_2delta0"] = t.xi_over_2delta0;
    nlohmann::ordered_json cols = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < t.t_over_tc.size(); ++c) cols["g_t" + short_label(t.t_over_tc[c])] = t.g[c];
    j["g"] = cols;
    return j.dump(2) + "\n";
  }
  std::string out = header_block("g-function", cfg, meta);
  out += "xi_over_2delta0";
  for (double tt : t.t_over_tc) out += ",g_t" + short_label(tt);
  out += "\n";
  for (std::size_t i = 0; i < t.xi_over_2delta0.size(); ++i) {
    out += format_double(t.xi_over_2delta0[i]);
    for (const auto& col : t.g) out += "," + format_double(col[i]);
    out += "\n";
  }
  return out;
}

std::string render_waveform(const RunConfig& cfg, const WaveformResult& w) {
  auto meta = constants_meta();
  meta.emplace_back("base_temperature_k", format_double(w.spec.base_temperature));
  meta.emplace_back("modulation_h_oe", format_double(w.spec.h));
  meta.emplace_back("modulation_frequency_hz", format_double(w.spec.frequency));
  meta.emplace_back("waveform_samples", std::to_string(cfg.waveform_samples));
  meta.emplace_back("mean_force_fN", format_double(w.signal.mean_force));
  meta.emplace_back("delta_f_fN", format_double(w.signal.jump));
  meta.emplace_back("row_status_0", w.row.status);
  if (cfg.format == OutputFormat::json) {
    nlohmann::ordered_json j = json_header("waveform", cfg, meta);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const WaveformSample& s : w.samples) {
      nlohmann::ordered_json o;
      o["t_s"] = s.t_s;
      o["H_Oe"] = s.field_oe;
      o["phase"] = std::string(1, phase_tag(s.phase));
      o["F_fN"] = json_number(s.force_fN);
      rows.push_back(o);
    }
    j["samples"] = rows;
    return j.dump(2) + "\n";
  }
  std::string out = header_block("waveform", cfg, meta);
  out += "t_s,H_Oe,phase,F_fN\n";
  for (const WaveformSample& s : w.samples) {
    out += format_double(s.t_s) + "," + format_double(s.field_oe) + "," + phase_tag(s.phase) + "," +
           format_double(s.force_fN) + "\n";
  }
  return out;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("output: cannot open '" + cfg.output + "' for writing");
  out << text;
  if (!out) throw ConfigError("output: write to '" + cfg.output + "' failed");
}

}  // namespace casimir_sc
