#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "casimir_sc/numerics.hpp"

using namespace casimir_sc;

TEST_CASE("Gauss-Kronrod integrates smooth and endpoint-singular integrands") {
  for (auto rule : {QuadratureRule::gauss_kronrod_15, QuadratureRule::gauss_kronrod_21}) {
    QuadratureOptions opt;
    opt.rule = rule;
    opt.rel_tol = 1e-12;
    const auto e = integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 30.0, opt);
    CHECK(e.converged);
    CHECK(e.value == doctest::Approx(-std::expm1(-30.0)).epsilon(1e-13));
    const auto s = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, opt);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-10));
    const auto l = integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0, opt);
    CHECK(l.value == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("breakpoints and panel export reproduce the integral") {
  const std::vector<double> breaks = {0.0, 0.5, 1.0, 3.0};
  auto f = [](double x) { return std::abs(x - 0.5) + x * x; };
  QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  std::vector<Panel> panels;
  const auto r = integrate_adaptive(f, std::span<const double>(breaks), opt, &panels);
  const double exact = 0.125 + 3.125 + 9.0;
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-12));
  std::vector<double> nodes, weights;
  for (const Panel& p : panels) append_kronrod_nodes(opt.rule, p.a, p.b, nodes, weights);
  CompensatedSum s;
  for (std::size_t i = 0; i < nodes.size(); ++i) s.add(weights[i] * f(nodes[i]));
  CHECK(s.value() == doctest::Approx(exact).epsilon(1e-12));
  for (std::size_t i = 1; i < panels.size(); ++i) CHECK(panels[i].a >= panels[i - 1].a);
}

TEST_CASE("compensated summation recovers cancelled digits") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-10).epsilon(1e-9));
}

TEST_CASE("log_one_minus is accurate for tiny arguments") {
  CHECK(log_one_minus(1e-20) == doctest::Approx(-1e-20).epsilon(1e-15));
  CHECK(log_one_minus(0.5) == doctest::Approx(std::log(0.5)));
}
