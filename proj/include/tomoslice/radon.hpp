#pragma once

// Power moments M_k(xi) = ∫ A_K(xi, t) t^k dt and the Radon range condition:
// M_k extends from the sphere to a homogeneous polynomial of degree k.

#include <cstdint>
#include <vector>

#include "tomoslice/bodies.hpp"

namespace tomoslice {

/// Exponent tuples of the degree-k monomials in n variables, graded-lex order
/// (x_1^k first).
std::vector<std::vector<int>> homogeneous_monomials(int n, int k);

double evaluate_monomial(const std::vector<int>& exponents, const Vector& x);

/// Gauss-Legendre moment over the chord interval. Smooth bodies are integrated in
/// the variable theta with t = mid + half * sin(theta), which absorbs the endpoint
/// behaviour (h^2 - t^2)^{(n-1)/2}; polytopes are split at vertex projections.
/// Throws InfiniteSupport for unbounded bodies.
double moment(const Body& body, const Direction& xi, int k, int quad_order = 64);

struct MomentReport {
  int k = 0;
  int n = 0;
  std::vector<Direction> directions;
  std::vector<double> moments;
  std::vector<std::vector<int>> monomials;
  std::vector<double> fit_coefficients;
  /// |fit - moments|_2 / max(|moments|_2, 1e-300)
  double relative_residual = 0.0;
  double absolute_residual = 0.0;
  int quad_order = 0;
  std::uint64_t seed = 0;
};

/// Samples directions (Fibonacci lattice for n = 3, seeded uniform otherwise),
/// computes M_k and least-squares fits a homogeneous degree-k polynomial.
MomentReport range_test(const Body& body, int k, int num_directions, std::uint64_t seed,
                        int quad_order = 64);

struct CenteredMomentReport {
  std::vector<Direction> directions;
  std::vector<double> m0;
  std::vector<double> m1;
  std::vector<double> predicted_m1;  // M_0 * (center . xi)
  double max_abs_error = 0.0;
  /// Error scaled by M_0 * (|center . xi| + hbar(xi)).
  double max_rel_error = 0.0;
  bool passed = false;
};

/// Checks M_1(xi) = M_0 (center . xi), i.e. the midpoint of the chord interval is the
/// centre projection. Passes at 1e-8 relative.
CenteredMomentReport centered_moment_identity_check(const Ellipsoid& body, std::uint64_t seed,
                                                    int num_directions = 50, int quad_order = 64);

}  // namespace tomoslice
