#include "tomoslice/radon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tomoslice/quadrature.hpp"
#include "tomoslice/sampling.hpp"
#include "tomoslice/sections.hpp"

namespace tomoslice {

namespace {

void fill_monomials(int n, int remaining, int var, std::vector<int>& current,
                    std::vector<std::vector<int>>& out) {
  if (var == n - 1) {
    current[var] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = e;
    fill_monomials(n, remaining - e, var + 1, current, out);
  }
}

}  // namespace

std::vector<std::vector<int>> homogeneous_monomials(int n, int k) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (k < 0) throw std::invalid_argument("moment order must be non-negative");
  std::vector<std::vector<int>> out;
  std::vector<int> current(n, 0);
  fill_monomials(n, k, 0, current, out);
  return out;
}

double evaluate_monomial(const std::vector<int>& exponents, const Vector& x) {
  double v = 1.0;
  for (size_t i = 0; i < exponents.size(); ++i)
    for (int p = 0; p < exponents[i]; ++p) v *= x[static_cast<Eigen::Index>(i)];
  return v;
}

double moment(const Body& body, const Direction& xi, int k, int quad_order) {
  if (k < 0) throw std::invalid_argument("moment order must be non-negative");
  if (quad_order < 1) throw std::invalid_argument("quadrature order must be positive");
  const ChordInterval chord = chord_interval(body, xi);
  const GaussLegendreRule rule = gauss_legendre(quad_order);
  auto weighted = [&](double t) { return section_volume(body, xi, t) * std::pow(t, k); };

  if (std::holds_alternative<Polytope>(body)) {
    const auto cuts = section_breakpoints(body, xi);
    return integrate_piecewise(rule, chord.lo, chord.hi, cuts, weighted);
  }
  const double mid = 0.5 * (chord.lo + chord.hi);
  const double half = 0.5 * chord.width();
  const double quarter_turn = 0.5 * std::numbers::pi;
  return integrate(rule, -quarter_turn, quarter_turn, [&](double theta) {
    return weighted(mid + half * std::sin(theta)) * half * std::cos(theta);
  });
}

MomentReport range_test(const Body& body, int k, int num_directions, std::uint64_t seed,
                        int quad_order) {
  const int n = dimension(body);
  MomentReport report;
  report.k = k;
  report.n = n;
  report.quad_order = quad_order;
  report.seed = seed;
  report.monomials = homogeneous_monomials(n, k);
  const int terms = static_cast<int>(report.monomials.size());
  if (num_directions < 2 * terms)
    throw std::invalid_argument("range test needs at least twice as many directions as monomials");

  report.directions = sample_directions(n, num_directions, seed);
  report.moments.assign(report.directions.size(), 0.0);
  parallel_for(report.directions.size(), [&](size_t i) {
    report.moments[i] = moment(body, report.directions[i], k, quad_order);
  });

  Matrix design(num_directions, terms);
  Vector rhs(num_directions);
  for (int i = 0; i < num_directions; ++i) {
    for (int j = 0; j < terms; ++j)
      design(i, j) = evaluate_monomial(report.monomials[j], report.directions[i].vec());
    rhs[i] = report.moments[i];
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < terms) throw RankDeficient("moment design matrix is rank deficient");
  const Vector coeffs = qr.solve(rhs);
  report.fit_coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
  report.absolute_residual = (design * coeffs - rhs).norm();
  report.relative_residual = report.absolute_residual / std::max(rhs.norm(), 1e-300);
  return report;
}

CenteredMomentReport centered_moment_identity_check(const Ellipsoid& body, std::uint64_t seed,
                                                    int num_directions, int quad_order) {
  CenteredMomentReport report;
  const Body wrapped = body;
  report.directions = sample_directions(body.dim(), num_directions, seed);
  const size_t count = report.directions.size();
  report.m0.assign(count, 0.0);
  report.m1.assign(count, 0.0);
  report.predicted_m1.assign(count, 0.0);
  parallel_for(count, [&](size_t i) {
    report.m0[i] = moment(wrapped, report.directions[i], 0, quad_order);
    report.m1[i] = moment(wrapped, report.directions[i], 1, quad_order);
  });
  for (size_t i = 0; i < count; ++i) {
    const Vector& xi = report.directions[i].vec();
    const double offset = body.center().dot(xi);
    report.predicted_m1[i] = report.m0[i] * offset;
    const double err = std::abs(report.m1[i] - report.predicted_m1[i]);
    const double scale = report.m0[i] * (std::abs(offset) + body.centered_support(xi));
    report.max_abs_error = std::max(report.max_abs_error, err);
    report.max_rel_error = std::max(report.max_rel_error, err / scale);
  }
  report.passed = report.max_rel_error < 1e-8;
  return report;
}

}  // namespace tomoslice
