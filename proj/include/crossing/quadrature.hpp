#pragma once

// Composite Gauss-Legendre rules built from Boost.Math's tabulated nodes.

#include <boost/math/quadrature/gauss.hpp>

#include <cstddef>
#include <vector>

#include "crossing/core.hpp"

namespace crossing {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  double weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

/// `panels` equal sub-intervals of [a, b], each with a 20-point
/// Gauss-Legendre rule.
inline QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  if (panels == 0) throw ConfigError("composite_gauss_legendre: panels must be > 0");
  QuadratureRule rule;
  const auto& xs = GL::abscissa();
  const auto& ws = GL::weights();
  rule.nodes.reserve(panels * 20);
  rule.weights.reserve(panels * 20);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = a + (static_cast<double>(k) + 0.5) * h;
    const double half = 0.5 * h;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      rule.nodes.push_back(mid - half * xs[i]);
      rule.weights.push_back(half * ws[i]);
      rule.nodes.push_back(mid + half * xs[i]);
      rule.weights.push_back(half * ws[i]);
    }
  }
  return rule;
}

}  // namespace crossing
