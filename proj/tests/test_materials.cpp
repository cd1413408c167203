#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "casimir_sc/constants.hpp"
#include "casimir_sc/errors.hpp"
#include "casimir_sc/materials.hpp"

using namespace casimir_sc;

namespace {

// Weak-coupling gap equation in Matsubara form, energies in units of k_B T_c:
// ln(1/t) = 2 pi t sum_{n>=0} [1/w_n - 1/sqrt(w_n^2 + d^2)], w_n = pi t (2n + 1).
double matsubara_residual(double d, double t) {
  constexpr long n_max = 200000;
  long double sum = 0.0L;
  for (long n = n_max - 1; n >= 0; --n) {
    const long double w = 3.14159265358979323846L * t * (2 * n + 1);
    sum += 1.0L / w - 1.0L / std::sqrt(w * w + static_cast<long double>(d) * d);
  }
  // Tail: sum_{n>=N} d^2 / (2 w_n^3) with sum (2n+1)^-3 ~ 1/(8 N^2).
  const double pt = kPi * t;
  const double tail = d * d / (2.0 * pt * pt * pt) / (8.0 * n_max * static_cast<double>(n_max));
  return 2.0 * kPi * t * (static_cast<double>(sum) + tail) - std::log(1.0 / t);
}

// Delta(T)/Delta(0) from the Matsubara form, by bisection.
double matsubara_gap_ratio(double t) {
  constexpr double weak = 1.7638769888620457;  // Delta(0) / k_B T_c
  double lo = 0.0;
  double hi = weak * 1.01;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (matsubara_residual(mid, t) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / weak;
}

}  // namespace

TEST_CASE("drude_eps reproduces direct evaluations") {
  CHECK(drude_eps(gold(), 0.035) == doctest::Approx(1.0 + 81.0 / (0.035 * 0.070)).epsilon(1e-14));
  CHECK(drude_eps(gold(), 0.035) == doctest::Approx(3.3062e4).epsilon(1e-4));
  CHECK(drude_eps(lead(), 0.1) == doctest::Approx(2709.48).epsilon(1e-5));
  CHECK(drude_eps(lead(), 1e12) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("drude_eps is > 1 and strictly decreasing on 1e-6..1e2 eV") {
  for (const MaterialParams& m : {gold(), lead()}) {
    double prev = INFINITY;
    for (double e = -6.0; e <= 2.0; e += 0.05) {
      const double v = drude_eps(m, std::pow(10.0, e));
      CHECK(v > 1.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("normal metal has no zero-frequency plasma response") {
  double prev = INFINITY;
  for (double xi : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double v = xi * xi * drude_eps_minus_one(lead(), xi);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("drude_eps rejects xi <= 0") {
  CHECK_THROWS_AS(drude_eps(gold(), 0.0), DomainError);
  CHECK_THROWS_AS(drude_eps(gold(), -1.0), DomainError);
}

TEST_CASE("material registry and validation") {
  CHECK(gold().gamma() == doctest::Approx(0.035));
  CHECK(lead().gamma() == doctest::Approx(0.1));
  CHECK_NOTHROW(gold().validate());
  CHECK_NOTHROW(lead().validate());
  MaterialParams m = lead();
  m.rrr = 0.5;
  CHECK_THROWS_WITH_AS(m.validate(), doctest::Contains("rrr"), DomainError);
  m = lead();
  m.lambda0.reset();
  CHECK_THROWS_WITH_AS(m.validate(), doctest::Contains("lambda0"), DomainError);
  m = gold();
  m.omega_p = 0.0;
  CHECK_THROWS_WITH_AS(m.validate(), doctest::Contains("omega_p"), DomainError);
}

TEST_CASE("bcs_gap endpoints and mid-range value") {
  const GapModel gap(lead().tc);
  CHECK(gap.delta0() == doctest::Approx(1.764 * PhysConstants::k_b * 7.2).epsilon(1e-15));
  CHECK(bcs_gap(gap, 0.0, 7.2) == doctest::Approx(1.0946e-3).epsilon(1e-3));
  CHECK(bcs_gap(gap, 7.2, 7.2) == 0.0);
  const double r = bcs_gap(gap, 3.6, 7.2) / gap.delta0();
  CHECK(r > 0.93);
  CHECK(r < 0.98);
  CHECK_THROWS_AS(bcs_gap(gap, 7.3, 7.2), DomainError);
  CHECK_THROWS_AS(bcs_gap(gap, -0.1, 7.2), DomainError);
}

TEST_CASE("gap table matches the Matsubara-sum form of the gap equation") {
  const GapModel gap(7.2);
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 0.97, 0.995}) {
    const double oracle = matsubara_gap_ratio(t);
    CAPTURE(t);
    CHECK(gap.ratio(t) == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(solve_gap_ratio(t) == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("gap table is strictly decreasing with exact endpoints") {
  const GapModel gap(7.2);
  CHECK(gap.ratio(0.0) == 1.0);
  CHECK(gap.ratio(1.0) == 0.0);
  double prev = 1.0;
  for (int i = 1; i < 2000; ++i) {
    const double t = 0.2 + 0.8 * i / 2000.0;
    const double r = gap.ratio(t);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("dirty_limit_ratio conventions") {
  const GapModel gap(7.2);
  // Delta_ref = 2 Delta(0) reproduces l/xi0 = 0.07.
  CHECK(dirty_limit_ratio(lead(), gap, GapScale::two_delta0) == doctest::Approx(0.0688).epsilon(2e-3));
  CHECK(dirty_limit_ratio(lead(), 2.2e-3) == doctest::Approx(kPi * 2.2 / 100.0).epsilon(1e-12));
  CHECK(dirty_limit_ratio(lead(), gap, GapScale::delta0) == doctest::Approx(0.0344).epsilon(2e-3));
  CHECK(dirty_limit_ratio(lead(), 0.0) == 0.0);
  CHECK_THROWS_AS(dirty_limit_ratio(gold(), 1e-3), DomainError);
}
