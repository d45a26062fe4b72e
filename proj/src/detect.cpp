#include "tomoslice/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "tomoslice/sampling.hpp"
#include "tomoslice/sections.hpp"

namespace tomoslice {

namespace {

double finite_support(const Body& body, const Vector& xi) {
  const SupportValue s = support(body, xi);
  if (s.infinite) throw InfiniteSupport("ellipsoid detection needs a bounded body");
  return s.value;
}

}  // namespace

std::vector<Direction> detection_directions(int n, int count, std::uint64_t seed) {
  return n == 3 ? fibonacci_sphere(count) : antithetic_directions(n, count, seed);
}

TranslationFit estimate_e(const Body& body, int num_directions, std::uint64_t seed) {
  const int n = dimension(body);
  if (num_directions < 2 * n) throw std::invalid_argument("need at least 2n directions");
  const auto dirs = detection_directions(n, num_directions, seed);
  Matrix design(num_directions, n);
  Vector odd(num_directions);
  Vector width(num_directions);
  for (int i = 0; i < num_directions; ++i) {
    const Vector& xi = dirs[i].vec();
    const double plus = finite_support(body, xi);
    const double minus = finite_support(body, -xi);
    design.row(i) = xi.transpose();
    odd[i] = plus - minus;
    width[i] = plus + minus;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < n) throw RankDeficient("direction set does not span R^n");
  TranslationFit fit;
  fit.e = qr.solve(odd);
  fit.linear_residual = (design * fit.e - odd).norm() / width.norm();
  return fit;
}

QuadraticFormFit quadratic_fit(const Body& body, const Vector& e, int num_directions,
                               std::uint64_t seed) {
  const int n = dimension(body);
  if (e.size() != n) throw DimensionMismatch(n, static_cast<int>(e.size()));
  const int terms = n * (n + 1) / 2;
  if (num_directions < 2 * terms) throw std::invalid_argument("need at least n(n+1) directions");
  const auto dirs = detection_directions(n, num_directions, seed);

  Matrix design(num_directions, terms);
  Vector target(num_directions);
  for (int i = 0; i < num_directions; ++i) {
    const Vector& xi = dirs[i].vec();
    const double centered = finite_support(body, xi) - 0.5 * e.dot(xi);
    target[i] = centered * centered;
    int col = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) design(i, col++) = (a == b ? 1.0 : 2.0) * xi[a] * xi[b];
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < terms) throw RankDeficient("direction set cannot identify a quadratic form");
  const Vector coeffs = qr.solve(target);

  QuadraticFormFit fit;
  fit.s = Matrix::Zero(n, n);
  int col = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      fit.s(a, b) = coeffs[col];
      fit.s(b, a) = coeffs[col];
      ++col;
    }
  fit.quadratic_residual = (design * coeffs - target).norm() / target.norm();
  return fit;
}

Ellipsoid EllipsoidReport::recovered() const {
  if (!accepted || !recovered_shape) throw std::logic_error("body was not accepted as an ellipsoid");
  return Ellipsoid(recovered_center, *recovered_shape);
}

EllipsoidReport is_ellipsoid(const Body& body, double tol_linear, double tol_quadratic,
                             int num_directions, std::uint64_t seed) {
  if (!(tol_linear > 0.0) || !(tol_quadratic > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  const int n = dimension(body);
  EllipsoidReport report;
  report.tol_linear = tol_linear;
  report.tol_quadratic = tol_quadratic;
  report.num_directions = num_directions;
  report.seed = seed;

  const TranslationFit translation = estimate_e(body, num_directions, seed);
  report.e = translation.e;
  report.linear_residual = translation.linear_residual;
  const QuadraticFormFit form = quadratic_fit(body, report.e, num_directions, seed);
  report.s = form.s;
  report.quadratic_residual = form.quadratic_residual;
  report.recovered_center = 0.5 * report.e;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(report.s, Eigen::EigenvaluesOnly);
  const Vector lambda = eig.eigenvalues();
  report.s_eigenvalues.assign(lambda.data(), lambda.data() + lambda.size());
  const bool positive = lambda.minCoeff() > 0.0;

  report.support_mismatch = std::numeric_limits<double>::infinity();
  if (positive) {
    Matrix shape = report.s.inverse();
    shape = 0.5 * (shape + shape.transpose()).eval();
    try {
      const Ellipsoid candidate(report.recovered_center, shape);
      report.recovered_shape = shape;
      double worst = 0.0;
      for (const auto& d : detection_directions(n, num_directions, seed)) {
        const double plus = finite_support(body, d.vec());
        const double minus = finite_support(body, -d.vec());
        worst = std::max(worst, std::abs(candidate.support(d.vec()) - plus) / (plus + minus));
      }
      report.support_mismatch = worst;
    } catch (const std::invalid_argument&) {
      report.recovered_shape.reset();
    }
  }
  report.accepted = positive && report.recovered_shape.has_value() &&
                    report.linear_residual < tol_linear &&
                    report.quadratic_residual < tol_quadratic &&
                    report.support_mismatch < tol_quadratic;
  if (!report.accepted) report.recovered_shape.reset();
  return report;
}

ConsistencyReport section_consistency_check(const Body& body, const EllipsoidReport& report,
                                            int num_probes, std::uint64_t seed) {
  if (num_probes < 1) throw std::invalid_argument("need at least one probe");
  const Ellipsoid recovered = report.recovered();
  const int n = dimension(body);
  const auto dirs = uniform_directions(n, num_probes, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.05, 0.95);

  ConsistencyReport out;
  out.num_probes = num_probes;
  for (const auto& xi : dirs) {
    const ChordInterval chord = chord_interval(body, xi);
    const double t = chord.lo + unit(rng) * chord.width();
    const double exact = section_volume(body, xi, t);
    const double closed = section_volume_ellipsoid(recovered, xi, t);
    out.max_error = std::max(out.max_error, std::abs(closed - exact) / std::abs(exact));
    const double gap = (chord.hi - t) * (t - chord.lo);
    out.constants.push_back(exact / std::pow(gap, 0.5 * (n - 1)) *
                            std::pow(0.5 * chord.width(), n));
  }
  const auto [lo, hi] = std::minmax_element(out.constants.begin(), out.constants.end());
  double mean = 0.0;
  for (double c : out.constants) mean += c;
  mean /= static_cast<double>(out.constants.size());
  out.constant_spread = (*hi - *lo) / mean;
  out.constant_direction_independent = out.constant_spread < 1e-8;
  return out;
}

}  // namespace tomoslice
