#include "casimir_sc/lifshitz.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "casimir_sc/constants.hpp"
#include "casimir_sc/errors.hpp"

namespace casimir_sc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and > 0");
}

QuadratureOptions quad_options(const EngineConfig& cfg) {
  QuadratureOptions opt;
  opt.rel_tol = cfg.rel_tol_quadrature;
  opt.rule = cfg.rule;
  return opt;
}

void check(const QuadratureResult& r, const QuadratureOptions& opt, const char* what, long l) {
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(r.value));
  if (!std::isfinite(r.value) || (!r.converged && r.abs_error > 10.0 * tol)) {
    throw NumericalFailure(std::string(what) + ": k_perp integral did not converge at l=" + std::to_string(l) +
                               ", value " + std::to_string(r.value) + " error " + std::to_string(r.abs_error),
                           r.abs_error, l);
  }
}

// int_{y0}^inf f(y) dy: graded panels over [y0, y0 + 32], then y = y0 + 32 - log u
// maps the exponential tail onto u in (0, 1].
template <class F>
QuadratureResult integrate_y(F f, double y0, const QuadratureOptions& opt, const char* what, long l) {
  constexpr std::array<double, 10> offsets = {0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  std::array<double, 10> breaks{};
  for (std::size_t i = 0; i < offsets.size(); ++i) breaks[i] = y0 + offsets[i];
  QuadratureResult head = integrate_adaptive(f, std::span<const double>(breaks), opt);
  check(head, opt, what, l);

  const double yt = breaks.back();
  auto mapped = [&f, yt](double u) { return f(yt - std::log(u)) / u; };
  QuadratureOptions tail_opt = opt;
  tail_opt.abs_tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(head.value));
  QuadratureResult tail = integrate_adaptive(mapped, 0.0, 1.0, tail_opt);
  check(tail, tail_opt, what, l);

  head.value += tail.value;
  head.abs_error += tail.abs_error;
  head.evaluations += tail.evaluations;
  return head;
}

enum class Pol { te, tm, both };

// Integral of y sum_alpha log(1 - r_a r_b e^{-y}) for Matsubara index l.
QuadratureResult term_integral(const Surface& a, const Surface& b, long l, double T, double d,
                               const EngineConfig& cfg, Pol pol) {
  const QuadratureOptions opt = quad_options(cfg);
  const double two_d = 2.0 * d;
  auto combine = [pol](const ReflectionPair& ra, const ReflectionPair& rb, double e) {
    double s = 0.0;
    if (pol != Pol::tm) s += log_one_minus(ra.r_te * rb.r_te * e);
    if (pol != Pol::te) s += log_one_minus(ra.r_tm * rb.r_tm * e);
    return s;
  };
  if (l == 0) {
    auto f = [&](double y) {
      const double k = y / two_d;
      return y * combine(a.zero_mode(k), b.zero_mode(k), std::exp(-y));
    };
    return integrate_y(f, 0.0, opt, "free_energy", l);
  }
  const double xi = matsubara_xi(l, T);
  const double kappa = xi / PhysConstants::hbar_c;
  const double ea = a.eps_minus_one(xi);
  const double eb = b.eps_minus_one(xi);
  auto f = [&](double y) {
    const double q = y / two_d;
    return y * combine(a.reflections(ea, q, kappa), b.reflections(eb, q, kappa), std::exp(-y));
  };
  return integrate_y(f, two_d * kappa, opt, "free_energy", l);
}

// Same at an arbitrary xi > 0; used by the Euler-Maclaurin tail.
double term_at_xi(const Surface& a, const Surface& b, double xi, double d, const EngineConfig& cfg) {
  const QuadratureOptions opt = quad_options(cfg);
  const double two_d = 2.0 * d;
  const double kappa = xi / PhysConstants::hbar_c;
  const double ea = a.eps_minus_one(xi);
  const double eb = b.eps_minus_one(xi);
  auto f = [&](double y) {
    const double q = y / two_d;
    const ReflectionPair ra = a.reflections(ea, q, kappa);
    const ReflectionPair rb = b.reflections(eb, q, kappa);
    const double e = std::exp(-y);
    return y * (log_one_minus(ra.r_te * rb.r_te * e) + log_one_minus(ra.r_tm * rb.r_tm * e));
  };
  return integrate_y(f, two_d * kappa, opt, "free_energy tail", -1).value;
}

// log(1 - x_n) - log(1 - x_s) given x_s - x_n directly.
double log_ratio(double dx, double xs) { return std::log1p(dx / (1.0 - xs)); }

// r(e_n + delta) - r(e_n) for both polarizations, formed without subtracting
// the two reflection coefficients.
ReflectionPair fresnel_shift(double en, double delta, double q, double kappa) {
  const double k2 = kappa * kappa;
  const double es = en + delta;
  const double sn = std::sqrt(q * q + en * k2);
  const double ss = std::sqrt(q * q + es * k2);
  const double ds = delta * k2 / (ss + sn);
  const double pn = q + sn;
  const double ps = q + ss;
  const double te = -k2 * (delta * pn * pn - en * ds * (2.0 * q + ss + sn)) / (ps * ps * pn * pn);
  const double tm = 2.0 * q * (delta * sn - (1.0 + en) * ds) / (((1.0 + es) * q + ss) * ((1.0 + en) * q + sn));
  return {te, tm};
}

QuadratureResult difference_integral(const Surface& a, const Surface& bn, const Surface& bs, long l, double T,
                                     double d, const EngineConfig& cfg, Pol pol) {
  const QuadratureOptions opt = quad_options(cfg);
  const double two_d = 2.0 * d;
  auto combine = [pol](const ReflectionPair& ra, const ReflectionPair& rs, const ReflectionPair& dr, double e) {
    double s = 0.0;
    if (pol != Pol::tm) s += log_ratio(ra.r_te * dr.r_te * e, ra.r_te * rs.r_te * e);
    if (pol != Pol::te) s += log_ratio(ra.r_tm * dr.r_tm * e, ra.r_tm * rs.r_tm * e);
    return s;
  };
  if (l == 0) {
    auto f = [&](double y) {
      const double k = y / two_d;
      const ReflectionPair rn = bn.zero_mode(k);
      const ReflectionPair rs = bs.zero_mode(k);
      return y * combine(a.zero_mode(k), rs, {rs.r_te - rn.r_te, rs.r_tm - rn.r_tm}, std::exp(-y));
    };
    return integrate_y(f, 0.0, opt, "free_energy_difference", l);
  }
  const double xi = matsubara_xi(l, T);
  const double kappa = xi / PhysConstants::hbar_c;
  const double ea = a.eps_minus_one(xi);
  const double en = bn.eps_minus_one(xi);
  const double es = bs.eps_minus_one(xi);
  // A BCS surface over its own Drude normal state knows eps_s - eps_n exactly.
  const bool shift = bn.kind() == Surface::Kind::drude && bs.kind() == Surface::Kind::bcs;
  const double delta = shift ? bs.eps_excess(xi) : 0.0;
  auto f = [&](double y) {
    const double q = y / two_d;
    const ReflectionPair rs = bs.reflections(es, q, kappa);
    ReflectionPair dr;
    if (shift) {
      dr = fresnel_shift(en, delta, q, kappa);
    } else {
      const ReflectionPair rn = bn.reflections(en, q, kappa);
      dr = {rs.r_te - rn.r_te, rs.r_tm - rn.r_tm};
    }
    return y * combine(a.reflections(ea, q, kappa), rs, dr, std::exp(-y));
  };
  return integrate_y(f, two_d * kappa, opt, "free_energy_difference", l);
}

// Ascending-l compensated sum; stops once xi_l >= xi_cap and three consecutive
// terms fall below rel_tol_series of the running total.
template <class Term>
FreeEnergyResult sum_series(Term term, double T, double xi_cap, const EngineConfig& cfg, const char* what) {
  const double xi1 = matsubara_xi(1, T);
  const double predicted = std::ceil(xi_cap / xi1);
  // The cap is a floor; slowly decaying series run on until the tolerance is met.
  const long hard_limit = static_cast<long>(std::max(4.0 * predicted, static_cast<double>(cfg.max_explicit_terms)));
  CompensatedSum sum;
  double err = 0.0;
  int quiet = 0;
  long l = 0;
  double last = 0.0;
  for (;; ++l) {
    if (l > hard_limit) {
      throw NumericalFailure(std::string(what) + ": Matsubara series did not converge after " +
                                 std::to_string(l) + " terms, last term " + std::to_string(last),
                             std::abs(last), l);
    }
    const QuadratureResult r = term(l);
    const double w = l == 0 ? 0.5 : 1.0;
    last = w * r.value;
    sum.add(last);
    err += w * r.abs_error;
    const bool small = std::abs(last) <= cfg.rel_tol_series * std::abs(sum.value());
    quiet = small ? quiet + 1 : 0;
    if (matsubara_xi(l, T) >= xi_cap && quiet >= 3) break;
  }
  FreeEnergyResult out;
  out.value = sum.value();
  out.terms_used = l + 1;
  out.error_estimate = err + std::abs(last);
  return out;
}

double prefactor(double T, double d) { return PhysConstants::k_b * T / (8.0 * kPi * d * d); }

void check_td(double T, double d) {
  require_positive(T, "temperature");
  require_positive(d, "separation");
}

}  // namespace

void EngineConfig::validate() const {
  auto tol_ok = [](double t) { return t > 0.0 && t <= 1e-3; };
  if (!tol_ok(rel_tol_quadrature)) throw DomainError("rel_tol_quadrature: must lie in (0, 1e-3]");
  if (!tol_ok(rel_tol_series)) throw DomainError("rel_tol_series: must lie in (0, 1e-3]");
  if (!(matsubara_cap_full >= 10.0)) throw DomainError("matsubara_cap_full: must be >= 10");
  if (!(matsubara_cap_diff >= 20.0)) throw DomainError("matsubara_cap_diff: must be >= 20");
  if (!(max_explicit_terms >= 100)) throw DomainError("max_explicit_terms: must be >= 100");
  if (!(tail_start >= 10 && tail_start <= max_explicit_terms)) {
    throw DomainError("tail_start: must lie in [10, max_explicit_terms]");
  }
}

double matsubara_xi(long l, double T) {
  if (l < 0) throw DomainError("matsubara_xi: l must be >= 0");
  if (!(T > 0.0)) throw DomainError("matsubara_xi: T must be > 0");
  return 2.0 * kPi * static_cast<double>(l) * PhysConstants::k_b * T;
}

ReflectionPair fresnel_from_eps_minus_one(double e1, double q, double kappa) {
  if (std::isinf(e1)) return {-1.0, 1.0};
  const double k2 = kappa * kappa;
  const double s = std::sqrt(q * q + e1 * k2);
  const double te = -e1 * k2 / ((q + s) * (q + s));
  const double den = (1.0 + e1) * q + s;
  const double tm = e1 * ((e1 + 2.0) * q * q - k2) / (den * den);
  return {te, tm};
}

namespace {

ReflectionPair fresnel_checked(double eps, double xi, double k_perp) {
  if (!(xi > 0.0)) throw DomainError("fresnel: xi must be > 0");
  if (!(k_perp >= 0.0)) throw DomainError("fresnel: k_perp must be >= 0");
  if (!(eps >= 1.0)) throw DomainError("fresnel: eps must be >= 1");
  const double kappa = xi / PhysConstants::hbar_c;
  return fresnel_from_eps_minus_one(eps - 1.0, std::hypot(kappa, k_perp), kappa);
}

}  // namespace

double fresnel_te(double eps, double xi, double k_perp) { return fresnel_checked(eps, xi, k_perp).r_te; }
double fresnel_tm(double eps, double xi, double k_perp) { return fresnel_checked(eps, xi, k_perp).r_tm; }

Surface Surface::ideal_mirror() { return Surface(); }

Surface Surface::drude(const MaterialParams& m) {
  m.validate();
  Surface s;
  s.kind_ = Kind::drude;
  s.material_ = m;
  return s;
}

Surface Surface::bcs(std::shared_ptr<const MattisBardeenResponse> response) {
  if (!response) throw DomainError("Surface::bcs: null response");
  Surface s;
  s.kind_ = Kind::bcs;
  s.material_ = response->material();
  const double wp = s.material_.omega_p / PhysConstants::hbar_c;
  s.kp2_ = wp * wp * response->g_zero();
  s.response_ = std::move(response);
  return s;
}

Surface Surface::for_phase(const MaterialParams& m, const GapModel& gap, Phase phase, double T) {
  if (phase == Phase::Normal) return drude(m);
  if (!m.is_superconductor() || !(T < m.tc)) {
    throw DomainError("Surface::for_phase: superconducting phase requires T < T_c");
  }
  return bcs(std::make_shared<const MattisBardeenResponse>(m, gap, T));
}

const char* Surface::name() const {
  switch (kind_) {
    case Kind::ideal_mirror: return "ideal-mirror";
    case Kind::drude: return "drude";
    case Kind::bcs: return "bcs";
  }
  return "?";
}

double Surface::eps_excess(double xi) const {
  if (kind_ != Kind::bcs || response_->is_normal()) return 0.0;
  return material_.omega_p * material_.omega_p * response_->g(xi) / (xi * xi);
}

double Surface::eps_minus_one(double xi) const {
  switch (kind_) {
    case Kind::ideal_mirror: return kInf;
    case Kind::drude: return drude_eps_minus_one(material_, xi);
    case Kind::bcs: return response_->eps_minus_one(xi);
  }
  return kInf;
}

ReflectionPair Surface::reflections(double e1, double q, double kappa) const {
  if (kind_ == Kind::ideal_mirror) return {-1.0, 1.0};
  return fresnel_from_eps_minus_one(e1, q, kappa);
}

ReflectionPair Surface::zero_mode(double k) const {
  switch (kind_) {
    case Kind::ideal_mirror: return {-1.0, 1.0};
    case Kind::drude: return {0.0, 1.0};
    case Kind::bcs: {
      if (kp2_ == 0.0) return {0.0, 1.0};
      const double s = std::sqrt(k * k + kp2_);
      return {-kp2_ / ((k + s) * (k + s)), 1.0};
    }
  }
  return {-1.0, 1.0};
}

ReflectionPair zero_mode_reflections(const MaterialParams& m, Phase phase, double T, double k_perp) {
  if (!(k_perp > 0.0)) throw DomainError("zero_mode_reflections: k_perp must be > 0");
  if (phase == Phase::Normal) return {0.0, 1.0};
  return Surface::for_phase(m, GapModel(m.tc), phase, T).zero_mode(k_perp);
}

double matsubara_term(const Surface& a, const Surface& b, long l, double T, double d, const EngineConfig& cfg) {
  check_td(T, d);
  return term_integral(a, b, l, T, d, cfg, Pol::both).value;
}

ReflectionPair matsubara_term_by_polarization(const Surface& a, const Surface& b, long l, double T, double d,
                                              const EngineConfig& cfg) {
  check_td(T, d);
  return {term_integral(a, b, l, T, d, cfg, Pol::te).value, term_integral(a, b, l, T, d, cfg, Pol::tm).value};
}

FreeEnergyResult free_energy(const Surface& a, const Surface& b, double T, double d, const EngineConfig& cfg) {
  check_td(T, d);
  cfg.validate();
  const double xi_cap = cfg.matsubara_cap_full * PhysConstants::hbar_c / d;
  const double xi1 = matsubara_xi(1, T);
  const double pre = prefactor(T, d);

  if (xi_cap / xi1 <= static_cast<double>(cfg.max_explicit_terms)) {
    auto term = [&](long l) { return term_integral(a, b, l, T, d, cfg, Pol::both); };
    FreeEnergyResult r = sum_series(term, T, xi_cap, cfg, "free_energy");
    r.value *= pre;
    r.error_estimate *= pre;
    return r;
  }

  // Explicit head, then sum_{l >= L} tau(l dx) ~ (1/dx) int_{(L-1/2) dx}^inf tau
  // + (dx/24) tau'((L-1/2) dx).
  const long L = cfg.tail_start;
  CompensatedSum sum;
  double err = 0.0;
  for (long l = 0; l < L; ++l) {
    const QuadratureResult r = term_integral(a, b, l, T, d, cfg, Pol::both);
    const double w = l == 0 ? 0.5 : 1.0;
    sum.add(w * r.value);
    err += w * r.abs_error;
  }
  const double xa = (static_cast<double>(L) - 0.5) * xi1;
  const double c = PhysConstants::hbar_c / (2.0 * d);  // xi per unit y
  auto tau = [&](double xi) { return term_at_xi(a, b, xi, d, cfg); };
  constexpr std::array<double, 10> offsets = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
  std::array<double, 10> breaks{};
  for (std::size_t i = 0; i < offsets.size(); ++i) breaks[i] = xa + c * offsets[i];
  QuadratureOptions opt = quad_options(cfg);
  opt.rel_tol = std::min(1e-3, 10.0 * cfg.rel_tol_quadrature);
  const QuadratureResult integral = integrate_adaptive(tau, std::span<const double>(breaks), opt);
  if (!integral.converged) {
    throw NumericalFailure("free_energy: Matsubara tail integral did not converge", integral.abs_error, L);
  }
  const double slope = (tau(xa + 0.5 * xi1) - tau(xa - 0.5 * xi1)) / xi1;
  const double tail = integral.value / xi1 + xi1 / 24.0 * slope;
  sum.add(tail);
  err += integral.abs_error / xi1;

  FreeEnergyResult r;
  r.value = pre * sum.value();
  r.terms_used = L;
  r.error_estimate = pre * err;
  r.tail_integral = true;
  return r;
}

FreeEnergyResult free_energy(const MaterialParams& a, const MaterialParams& b, Phase phase_b, double T,
                             double d, const EngineConfig& cfg) {
  const Surface sa = Surface::drude(a);
  if (phase_b == Phase::Normal) return free_energy(sa, Surface::drude(b), T, d, cfg);
  return free_energy(sa, Surface::for_phase(b, GapModel(b.tc), phase_b, T), T, d, cfg);
}

FreeEnergyResult free_energy_difference(const Surface& a, const Surface& bn, const Surface& bs, double T,
                                        double d, double two_delta0, const EngineConfig& cfg) {
  check_td(T, d);
  cfg.validate();
  require_positive(two_delta0, "two_delta0");
  const double xi_cap = cfg.matsubara_cap_diff * two_delta0;
  auto term = [&](long l) { return difference_integral(a, bn, bs, l, T, d, cfg, Pol::both); };
  FreeEnergyResult r = sum_series(term, T, xi_cap, cfg, "free_energy_difference");
  const double pre = prefactor(T, d);
  r.value *= pre;
  r.error_estimate *= pre;
  return r;
}

ReflectionPair difference_term_by_polarization(const Surface& a, const Surface& bn, const Surface& bs, long l,
                                               double T, double d, const EngineConfig& cfg) {
  check_td(T, d);
  return {difference_integral(a, bn, bs, l, T, d, cfg, Pol::te).value,
          difference_integral(a, bn, bs, l, T, d, cfg, Pol::tm).value};
}

FreeEnergyResult free_energy_difference(const MaterialParams& au, const MaterialParams& pb, double T, double d,
                                        const EngineConfig& cfg) {
  return AuPbSystem(au, pb, T, cfg.rule).difference(d, cfg);
}

double pfa_force_fN(double difference_eV_nm2, double radius_um) {
  const double radius_nm = radius_um * 1e3;
  return 2.0 * kPi * radius_nm * difference_eV_nm2 * PhysConstants::ev_per_nm_to_newton *
         PhysConstants::newton_to_femtonewton;
}

PfaResult delta_force_pfa(const MaterialParams& au, const MaterialParams& pb, double radius_um, double T, double d,
                          const EngineConfig& cfg) {
  return AuPbSystem(au, pb, T, cfg.rule).delta_force(radius_um, d, cfg);
}

AuPbSystem::AuPbSystem(const MaterialParams& au, const MaterialParams& pb, double T, QuadratureRule rule)
    : T_(T), two_delta0_(0.0), au_(Surface::drude(au)), pb_n_(Surface::drude(pb)) {
  require_positive(T, "temperature");
  pb.validate();
  if (!pb.is_superconductor()) throw DomainError("AuPbSystem: second material must be a superconductor");
  if (T > pb.tc) throw DomainError("AuPbSystem: T above T_c");
  const GapModel gap(pb.tc);
  two_delta0_ = 2.0 * gap.delta0();
  pb_s_ = Surface::bcs(std::make_shared<const MattisBardeenResponse>(pb, gap, T, rule));
}

FreeEnergyResult AuPbSystem::normal(double d, const EngineConfig& cfg) const {
  return free_energy(au_, pb_n_, T_, d, cfg);
}

FreeEnergyResult AuPbSystem::super(double d, const EngineConfig& cfg) const {
  return free_energy(au_, pb_s_, T_, d, cfg);
}

FreeEnergyResult AuPbSystem::difference(double d, const EngineConfig& cfg) const {
  return free_energy_difference(au_, pb_n_, pb_s_, T_, d, two_delta0_, cfg);
}

PfaResult AuPbSystem::delta_force(double radius_um, double d, const EngineConfig& cfg) const {
  require_positive(radius_um, "radius");
  const FreeEnergyResult diff = difference(d, cfg);
  PfaResult out;
  out.difference_eV_nm2 = diff.value;
  out.delta_force_fN = pfa_force_fN(diff.value, radius_um);
  out.error_estimate_fN = std::abs(pfa_force_fN(diff.error_estimate, radius_um));
  out.pfa_bound = d / (radius_um * 1e3);
  out.pfa_warning = out.pfa_bound >= 1e-2;
  out.terms_used = diff.terms_used;
  return out;
}

}  // namespace casimir_sc
