#pragma once

// Independent reference computations. Nothing here calls the section engines.

#include <cmath>
#include <numbers>
#include <random>

#include "tomoslice/bodies.hpp"

namespace tomoslice::testing {

/// ∫_{-1}^{1} (1 - s^2)^{(n-1)/2} s^j ds via the Beta function.
inline double weighted_power_integral(int n, int j) {
  if (j % 2 == 1) return 0.0;
  return std::beta(0.5 * (j + 1), 0.5 * (n + 1));
}

/// Closed-form M_k(xi) for an ellipsoid from A = C hbar^{-n} (hbar^2 - (t - c.xi)^2)^{(n-1)/2},
/// C = omega_{n-1} prod(a): substituting t = c.xi + hbar s gives
/// M_k = C sum_j binom(k, j) (c.xi)^{k-j} hbar^j J_j.
inline double ellipsoid_moment_closed_form(const Ellipsoid& e, const Vector& xi, int k) {
  const int n = e.dim();
  const double omega = std::pow(std::numbers::pi, 0.5 * (n - 1)) / std::tgamma(0.5 * (n - 1) + 1.0);
  const double c = omega * e.axes_product();
  const double offset = e.center().dot(xi);
  const double hbar = std::sqrt(xi.dot(e.inverse_shape() * xi));
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    sum += binom * std::pow(offset, k - j) * std::pow(hbar, j) * weighted_power_integral(n, j);
    binom = binom * (k - j) / (j + 1);
  }
  return c * sum;
}

/// Vertex-free support oracle: hill-climbs x.xi over boundary points
/// c + L^{-T} u (|u| = 1, M = L L^T) starting from the best of many random u.
inline double ellipsoid_support_by_search(const Ellipsoid& e, const Vector& xi, std::uint64_t seed) {
  const int n = e.dim();
  const Matrix l = Eigen::LLT<Matrix>(e.shape()).matrixL();
  const Matrix boundary_map = l.transpose().inverse();
  auto value = [&](const Vector& u) { return (e.center() + boundary_map * u.normalized()).dot(xi); };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector best = Vector::Unit(n, 0);
  double best_value = value(best);
  for (int i = 0; i < 4000; ++i) {
    Vector u(n);
    for (int j = 0; j < n; ++j) u[j] = normal(rng);
    if (const double v = value(u); v > best_value) {
      best_value = v;
      best = u.normalized();
    }
  }
  for (double step = 0.1; step > 1e-12; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int j = 0; j < n; ++j)
        for (double sign : {1.0, -1.0}) {
          Vector u = best;
          u[j] += sign * step;
          if (const double v = value(u); v > best_value) {
            best_value = v;
            best = u.normalized();
            improved = true;
          }
        }
    }
  }
  return best_value;
}

/// Predicted constant c in A(xi, t0 - d) ~ c d^{(n-1)/2}, from principal curvatures of the
/// boundary at the tangency point. The boundary is written as a graph over the tangent
/// plane (found by bisection on the membership predicate) and its Hessian is taken by
/// second-order central differences; the slice at depth d is then the ellipsoid
/// {y : y^T K y / 2 <= d}, giving c = omega_{n-1} 2^{(n-1)/2} det(K)^{-1/2}.
inline double curvature_oracle_constant(const Ellipsoid& e, const Direction& xi) {
  const int n = e.dim();
  const Vector apex = e.support_point(xi.vec());
  const Matrix basis = orthonormal_complement(xi);
  const double scale = std::sqrt(e.inverse_shape().trace());

  // Height below the tangent plane of the boundary point above in-plane offset y.
  auto depth = [&](const Vector& y) {
    const Vector foot = apex + basis * y;
    // grow from a tiny step so the first hit lies before the far side of the chord
    double inside = 1e-9 * scale;
    double outside = 0.0;
    while (!e.contains(foot - inside * xi.vec())) {
      outside = inside;
      inside *= 2.0;
    }
    for (int i = 0; i < 200 && inside - outside > 1e-17 * scale; ++i) {
      const double mid = 0.5 * (inside + outside);
      (e.contains(foot - mid * xi.vec()) ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
  };

  const double h = 1e-3 * scale;
  Matrix hessian(n - 1, n - 1);
  const Vector zero = Vector::Zero(n - 1);
  const double f0 = depth(zero);
  for (int i = 0; i < n - 1; ++i) {
    const Vector ei = Vector::Unit(n - 1, i) * h;
    hessian(i, i) = (depth(ei) - 2.0 * f0 + depth(-ei)) / (h * h);
    for (int j = i + 1; j < n - 1; ++j) {
      const Vector ej = Vector::Unit(n - 1, j) * h;
      hessian(i, j) = hessian(j, i) =
          (depth(ei + ej) - depth(ei - ej) - depth(-ei + ej) + depth(-ei - ej)) / (4.0 * h * h);
    }
  }
  const double omega = std::pow(std::numbers::pi, 0.5 * (n - 1)) / std::tgamma(0.5 * (n - 1) + 1.0);
  return omega * std::pow(2.0, 0.5 * (n - 1)) / std::sqrt(hessian.determinant());
}

}  // namespace tomoslice::testing
