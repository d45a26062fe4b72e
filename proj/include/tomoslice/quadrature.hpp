#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tomoslice {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes are roots of P_n found by Newton iteration from the Tricomi initial guess.
/// Exact for polynomials of degree <= 2n - 1.
GaussLegendreRule gauss_legendre(int n);

/// Integrates f over [a, b] with the given rule.
double integrate(const GaussLegendreRule& rule, double a, double b,
                 const std::function<double(double)>& f);

/// Integrates f over [a, b], applying the rule on every sub-interval delimited by
/// the (sorted, deduplicated) breakpoints that fall strictly inside (a, b).
double integrate_piecewise(const GaussLegendreRule& rule, double a, double b,
                           std::span<const double> breakpoints,
                           const std::function<double(double)>& f);

}  // namespace tomoslice
