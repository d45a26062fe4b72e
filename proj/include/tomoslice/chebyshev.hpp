#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tomoslice::chebyshev {

/// Chebyshev-Lobatto points (extrema of T_{n-1}) mapped to [lo, hi], ascending,
/// endpoints included.
std::vector<double> lobatto_grid(double lo, double hi, int n);

/// Rows T_0(s_i) .. T_degree(s_i).
Eigen::MatrixXd vandermonde(std::span<const double> s, int degree);

/// Clenshaw evaluation of sum_k c_k T_k(s).
double evaluate(std::span<const double> coeffs, double s);

/// Coefficients of the derivative series (one degree shorter; {0} for constants).
std::vector<double> derivative(std::span<const double> coeffs);

/// Real roots of the series from the eigenvalues of its colleague matrix, ascending.
/// Trailing coefficients below 1e-14 of the largest are dropped first.
std::vector<double> real_roots(std::span<const double> coeffs, double imag_tol = 1e-7);

/// Affine map between t in [lo, hi] and s in [-1, 1].
struct AffineMap {
  double lo = -1.0;
  double hi = 1.0;
  double to_s(double t) const { return (2.0 * t - lo - hi) / (hi - lo); }
  double to_t(double s) const { return 0.5 * (lo + hi) + 0.5 * (hi - lo) * s; }
};

}  // namespace tomoslice::chebyshev
