#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "casimir_sc/constants.hpp"
#include "casimir_sc/errors.hpp"
#include "casimir_sc/mattis_bardeen.hpp"

using namespace casimir_sc;

namespace {

const MaterialParams kPb = lead();
const GapModel kGap(kPb.tc);
const double kTwoDelta0 = 2.0 * kGap.delta0();

const MattisBardeenResponse& response(double t) {
  static const MattisBardeenResponse r01(kPb, kGap, 0.1 * kPb.tc);
  static const MattisBardeenResponse r05(kPb, kGap, 0.5 * kPb.tc);
  static const MattisBardeenResponse r09(kPb, kGap, 0.9 * kPb.tc);
  return t < 0.3 ? r01 : t < 0.7 ? r05 : r09;
}

}  // namespace

TEST_CASE("Mattis-Bardeen ratio: production and oracle integrations agree") {
  for (double t : {0.1, 0.5, 0.9}) {
    const double delta = bcs_gap(kGap, t * kPb.tc, kPb.tc);
    const double kt = PhysConstants::k_b * t * kPb.tc;
    for (double w_over : {0.01, 0.3, 0.99, 1.001, 1.5, 3.0, 30.0}) {
      const double w = w_over * 2.0 * delta;
      CAPTURE(t);
      CAPTURE(w_over);
      CHECK(mattis_bardeen_ratio(w, delta, kt) ==
            doctest::Approx(mattis_bardeen_ratio_oracle(w, delta, kt)).epsilon(1e-8));
    }
  }
}

TEST_CASE("Mattis-Bardeen ratio limits") {
  const double delta = kGap.delta0();
  // T = 0: no absorption below the gap, normal-state response far above it.
  CHECK(mattis_bardeen_ratio(1.5 * delta, delta, 0.0) == 0.0);
  CHECK(mattis_bardeen_ratio(1e4 * delta, delta, 0.0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(mattis_bardeen_ratio(1.0, 0.0, 1e-4) == 1.0);
  CHECK_THROWS_AS(mattis_bardeen_ratio(0.0, delta, 1e-4), DomainError);
}

TEST_CASE("g vanishes identically at T_c") {
  for (double xi : {0.0, 1e-6, 1e-3, 0.1}) CHECK(mattis_bardeen_g(kPb, kGap, xi, kPb.tc) == 0.0);
  CHECK(MattisBardeenResponse(kPb, kGap, kPb.tc).is_normal());
}

TEST_CASE("g is nonnegative, decreasing above 0.25 (2 Delta(0)) and ordered in T") {
  std::vector<double> grid;
  for (double e = -2.0; e <= 2.0 + 1e-12; e += 0.05) grid.push_back(std::pow(10.0, e));
  for (double t : {0.1, 0.5, 0.9}) {
    double prev = INFINITY;
    for (double x : grid) {
      const double g = response(t).g(x * kTwoDelta0);
      CHECK(g >= 0.0);
      if (x >= 0.25) {
        CHECK(g <= prev);
        prev = g;
      }
    }
  }
  for (double x : grid) {
    CHECK(response(0.1).g(x * kTwoDelta0) >= response(0.5).g(x * kTwoDelta0));
    CHECK(response(0.5).g(x * kTwoDelta0) >= response(0.9).g(x * kTwoDelta0));
  }
}

TEST_CASE("g near 0.9 T_c rises at small xi from the thermal coherence peak") {
  // sigma_1s > sigma_n at low frequency near T_c, so 1 - R < 0 there and the
  // kernel w^2/(w^2 + xi^2) initially removes negative weight.
  const auto& r = response(0.9);
  CHECK(mattis_bardeen_ratio(0.05 * r.gap(), r.gap(), PhysConstants::k_b * 0.9 * kPb.tc) > 1.0);
  CHECK(r.g(0.1 * kTwoDelta0) > r.g_zero());
  CHECK(response(0.1).g(0.1 * kTwoDelta0) < response(0.1).g_zero());
}

TEST_CASE("g(0+) is stable between 1e-8 and 1e-7 eV") {
  for (double t : {0.1, 0.5, 0.9}) {
    const auto& r = response(t);
    CHECK(r.g_zero() > 0.0);
    CHECK(r.g(1e-7) == doctest::Approx(r.g_zero()).epsilon(1e-3));
    CHECK(r.g(0.0) == r.g_zero());
  }
}

TEST_CASE("production g matches the Kramers-Kronig oracle over two decades") {
  for (double t : {0.1, 0.5, 0.9}) {
    for (double x : {0.1, 0.3, 1.0, 3.0, 10.0}) {
      const double xi = x * kTwoDelta0;
      CAPTURE(t);
      CAPTURE(x);
      CHECK(response(t).g(xi) == doctest::Approx(kk_oracle_g(kPb, kGap, xi, t * kPb.tc)).epsilon(1e-4));
    }
  }
}

TEST_CASE("KK oracle reduces to Drude at T_c and obeys the sum rule") {
  const double scale = kPb.omega_p * kPb.omega_p / (4.0 * kPi);
  for (double xi : {1e-3, 0.1, 10.0}) {
    CHECK(kk_oracle_sigma(kPb, kGap, xi, kPb.tc) == scale / (xi + kPb.gamma()));
  }
  const double xi = 200.0;
  CHECK(kk_oracle_sigma(kPb, kGap, xi, 0.1 * kPb.tc) * xi == doctest::Approx(scale).epsilon(1e-3));
  CHECK_THROWS_AS(kk_oracle_sigma(kPb, kGap, 0.0, 0.1 * kPb.tc), DomainError);
}

TEST_CASE("eps_bcs short-circuits to Drude at T_c bit for bit") {
  for (double xi : {1e-5, 1e-3, 0.1, 3.0}) CHECK(eps_bcs(kPb, kGap, xi, kPb.tc) == drude_eps(kPb, xi));
}

TEST_CASE("eps_bcs exceeds Drude when g > 0 and has a plasma-like zero-frequency limit") {
  const double T = 0.1 * kPb.tc;
  CHECK(eps_bcs(kPb, kGap, kTwoDelta0, T) > drude_eps(kPb, kTwoDelta0));
  const auto& r = response(0.1);
  const double w2 = kPb.omega_p * kPb.omega_p;
  const double limit = w2 * kk_oracle_g(kPb, kGap, 1e-8, T);
  CHECK(1e-8 * 1e-8 * r.eps_minus_one(1e-8) == doctest::Approx(limit).epsilon(1e-4));
  CHECK(limit > 0.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(mattis_bardeen_g(kPb, kGap, 0.1, kPb.tc + 0.1), DomainError);
  CHECK_THROWS_AS(mattis_bardeen_g(kPb, kGap, -0.1, 1.0), DomainError);
  CHECK_THROWS_AS(eps_bcs(kPb, kGap, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(MattisBardeenResponse(gold(), kGap, 1.0), DomainError);
}

TEST_CASE("sample returns (xi, eps) pairs") {
  const std::vector<double> xs = {1e-3, 1e-2};
  const auto s = response(0.5).sample(xs);
  REQUIRE(s.size() == 2);
  CHECK(s[1].xi == 1e-2);
  CHECK(s[1].eps == response(0.5).eps(1e-2));
}
