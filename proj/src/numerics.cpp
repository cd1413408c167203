#include "casimir_sc/numerics.hpp"

namespace casimir_sc {

namespace {

template <class Rule>
void append_nodes(double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t j = 0; j + 1 < Rule::kHalf; ++j) {
    nodes.push_back(center - half * Rule::xgk[j]);
    weights.push_back(half * Rule::wgk[j]);
    nodes.push_back(center + half * Rule::xgk[j]);
    weights.push_back(half * Rule::wgk[j]);
  }
  nodes.push_back(center);
  weights.push_back(half * Rule::wgk[Rule::kHalf - 1]);
}

}  // namespace

void append_kronrod_nodes(QuadratureRule rule, double a, double b, std::vector<double>& nodes,
                          std::vector<double>& weights) {
  if (rule == QuadratureRule::gauss_kronrod_21) {
    append_nodes<detail::Kronrod21>(a, b, nodes, weights);
  } else {
    append_nodes<detail::Kronrod15>(a, b, nodes, weights);
  }
}

}  // namespace casimir_sc
