#pragma once

// Adaptive Gauss-Kronrod quadrature and compensated summation.
//
// The integrator is globally adaptive in the QUADPACK sense: the panel with the
// largest error estimate is bisected until the summed estimate meets the
// tolerance. Callers may seed the panel set with breakpoints at known
// non-smooth points and may retrieve the accepted panels, which is how the
// Mattis-Bardeen response builds its reusable node table.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace casimir_sc {

enum class QuadratureRule { gauss_kronrod_15, gauss_kronrod_21 };

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_panels = 4000;
  QuadratureRule rule = QuadratureRule::gauss_kronrod_15;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(1 - x), accurate for |x| -> 0 where log(1 - x) ~ -x.
inline double log_one_minus(double x) { return std::log1p(-x); }

namespace detail {

struct Kronrod15 {
  static constexpr std::size_t kHalf = 8;  // nodes on [0, 1], center last
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights at the odd-indexed Kronrod nodes; the last one is the center.
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  static constexpr bool kCenterIsGauss = true;
};

struct Kronrod21 {
  static constexpr std::size_t kHalf = 11;
  static constexpr std::array<double, 11> xgk = {
      0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
      0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
      0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
      0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
      0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
      0.0};
  static constexpr std::array<double, 11> wgk = {
      0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
      0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
      0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
      0.123491976262065851077208896955370, 0.134709217311473325928054001771707,
      0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
      0.149445554002916905664936468389821};
  static constexpr std::array<double, 5> wg = {
      0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
      0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
      0.295524224714752870173892994651338};
  static constexpr bool kCenterIsGauss = false;
};

template <class Rule, class F>
Panel apply_rule(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * Rule::wgk[Rule::kHalf - 1];
  double resg = Rule::kCenterIsGauss ? fc * Rule::wg[Rule::wg.size() - 1] : 0.0;
  double resabs = std::abs(resk);
  std::array<double, Rule::kHalf - 1> f1{};
  std::array<double, Rule::kHalf - 1> f2{};
  for (std::size_t j = 0; j + 1 < Rule::kHalf; ++j) {
    const double dx = half * Rule::xgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double s = f1[j] + f2[j];
    resk += Rule::wgk[j] * s;
    resabs += Rule::wgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += Rule::wg[j / 2] * s;
  }
  const double mean = 0.5 * resk;
  double resasc = Rule::wgk[Rule::kHalf - 1] * std::abs(fc - mean);
  for (std::size_t j = 0; j + 1 < Rule::kHalf; ++j) {
    resasc += Rule::wgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double habs = std::abs(half);
  resk *= half;
  resabs *= habs;
  resasc *= habs;
  double err = std::abs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return Panel{a, b, resk, err};
}

template <class Rule, class F>
QuadratureResult adaptive(F& f, std::span<const double> breaks, const QuadratureOptions& opt,
                          std::vector<Panel>* panels_out) {
  constexpr std::size_t kEvalsPerPanel = 2 * Rule::kHalf - 1;
  auto by_error = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::vector<Panel> heap;
  heap.reserve(std::max<std::size_t>(64, breaks.size()));
  QuadratureResult out;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p = apply_rule<Rule>(f, breaks[i], breaks[i + 1]);
    out.evaluations += kEvalsPerPanel;
    total += p.value;
    total_err += p.error;
    heap.push_back(p);
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  std::vector<Panel> frozen;  // panels too narrow to bisect further
  while (!heap.empty() && total_err > tolerance() && heap.size() + frozen.size() < opt.max_panels) {
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    const Panel left = apply_rule<Rule>(f, worst.a, mid);
    const Panel right = apply_rule<Rule>(f, mid, worst.b);
    out.evaluations += 2 * kEvalsPerPanel;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
  }

  heap.insert(heap.end(), frozen.begin(), frozen.end());
  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  CompensatedSum value;
  double err = 0.0;
  for (const Panel& p : heap) {
    value.add(p.value);
    err += p.error;
  }
  out.value = value.value();
  out.abs_error = err;
  out.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
  if (panels_out != nullptr) *panels_out = std::move(heap);
  return out;
}

}  // namespace detail

template <class F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                    const QuadratureOptions& opt = {},
                                    std::vector<Panel>* panels_out = nullptr) {
  switch (opt.rule) {
    case QuadratureRule::gauss_kronrod_21:
      return detail::adaptive<detail::Kronrod21>(f, breakpoints, opt, panels_out);
    case QuadratureRule::gauss_kronrod_15:
    default:
      return detail::adaptive<detail::Kronrod15>(f, breakpoints, opt, panels_out);
  }
}

template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt = {},
                                    std::vector<Panel>* panels_out = nullptr) {
  const std::array<double, 2> breaks = {a, b};
  return integrate_adaptive(f, std::span<const double>(breaks), opt, panels_out);
}

// Appends the Kronrod nodes and weights of `rule` mapped onto [a, b].
void append_kronrod_nodes(QuadratureRule rule, double a, double b, std::vector<double>& nodes,
                          std::vector<double>& weights);

}  // namespace casimir_sc
