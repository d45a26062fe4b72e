#include "tomoslice/chebyshev.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tomoslice::chebyshev {

std::vector<double> lobatto_grid(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("Lobatto grid needs at least two points");
  if (!(hi > lo)) throw std::invalid_argument("Lobatto grid needs lo < hi");
  std::vector<double> grid(n);
  const AffineMap map{lo, hi};
  // sin form keeps the grid exactly symmetric about the midpoint.
  for (int j = 0; j < n; ++j)
    grid[j] = map.to_t(std::sin(std::numbers::pi * (2.0 * j - (n - 1)) / (2.0 * (n - 1))));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

Eigen::MatrixXd vandermonde(std::span<const double> s, int degree) {
  if (degree < 0) throw std::invalid_argument("negative degree");
  Eigen::MatrixXd v(static_cast<Eigen::Index>(s.size()), degree + 1);
  for (size_t i = 0; i < s.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    v(r, 0) = 1.0;
    if (degree >= 1) v(r, 1) = s[i];
    for (int k = 2; k <= degree; ++k) v(r, k) = 2.0 * s[i] * v(r, k - 1) - v(r, k - 2);
  }
  return v;
}

double evaluate(std::span<const double> coeffs, double s) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (size_t k = coeffs.size(); k-- > 1;) {
    const double b0 = 2.0 * s * b1 - b2 + coeffs[k];
    b2 = b1;
    b1 = b0;
  }
  const double c0 = coeffs.empty() ? 0.0 : coeffs[0];
  return s * b1 - b2 + c0;
}

std::vector<double> derivative(std::span<const double> coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {0.0};
  std::vector<double> d(n + 2, 0.0);
  for (int k = n; k >= 1; --k) d[k - 1] = d[k + 1] + 2.0 * k * coeffs[k];
  d[0] *= 0.5;
  d.resize(n);
  return d;
}

std::vector<double> real_roots(std::span<const double> coeffs, double imag_tol) {
  double biggest = 0.0;
  for (double c : coeffs) biggest = std::max(biggest, std::abs(c));
  if (biggest == 0.0) throw std::invalid_argument("zero polynomial has no isolated roots");
  int degree = static_cast<int>(coeffs.size()) - 1;
  while (degree > 0 && std::abs(coeffs[degree]) <= 1e-14 * biggest) --degree;
  if (degree == 0) return {};
  if (degree == 1) return {-coeffs[0] / coeffs[1]};

  Eigen::MatrixXd colleague = Eigen::MatrixXd::Zero(degree, degree);
  colleague(0, 1) = 1.0;
  for (int i = 1; i < degree - 1; ++i) {
    colleague(i, i - 1) = 0.5;
    colleague(i, i + 1) = 0.5;
  }
  colleague(degree - 1, degree - 2) = 0.5;
  for (int k = 0; k < degree; ++k) colleague(degree - 1, k) -= coeffs[k] / (2.0 * coeffs[degree]);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(colleague, false);
  std::vector<double> roots;
  for (const auto& z : solver.eigenvalues())
    if (std::abs(z.imag()) <= imag_tol * (1.0 + std::abs(z.real()))) roots.push_back(z.real());
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace tomoslice::chebyshev
