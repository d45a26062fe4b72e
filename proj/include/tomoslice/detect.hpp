#pragma once

// Ellipsoid detection from support data:
//   h(xi) - h(-xi) = e . xi          (linear fit, translation vector e)
//   H(xi) = h(xi) - e . xi / 2       (support of K - e/2)
//   H(xi)^2 = xi^T S xi              (quadratic fit)
// K is accepted as the ellipsoid {x : (x - e/2)^T S^{-1} (x - e/2) <= 1}.

#include <cstdint>
#include <optional>
#include <vector>

#include "tomoslice/bodies.hpp"

namespace tomoslice {

inline constexpr double kDefaultDetectTolerance = 1e-8;
/// Tolerance used when support data carries Monte Carlo noise.
inline constexpr double kNoisyDetectTolerance = 1e-4;

/// Fibonacci lattice for n = 3, seeded antithetic pairs otherwise.
std::vector<Direction> detection_directions(int n, int count, std::uint64_t seed);

struct TranslationFit {
  Vector e;
  /// |fit - (h(xi) - h(-xi))|_2 / |h(xi) + h(-xi)|_2 (scaled by the widths).
  double linear_residual = 0.0;
};

TranslationFit estimate_e(const Body& body, int num_directions, std::uint64_t seed);

struct QuadraticFormFit {
  Matrix s;
  /// |fit - H^2|_2 / |H^2|_2
  double quadratic_residual = 0.0;
};

QuadraticFormFit quadratic_fit(const Body& body, const Vector& e, int num_directions,
                               std::uint64_t seed);

struct EllipsoidReport {
  Vector e;
  Matrix s;
  double linear_residual = 0.0;
  double quadratic_residual = 0.0;
  /// max |h_recovered - h| / (h(xi) + h(-xi)) over the direction set; infinite
  /// when S is not positive definite.
  double support_mismatch = 0.0;
  std::vector<double> s_eigenvalues;
  bool accepted = false;
  Vector recovered_center;                 // e / 2
  std::optional<Matrix> recovered_shape;   // S^{-1}, when S is positive definite
  double tol_linear = kDefaultDetectTolerance;
  double tol_quadratic = kDefaultDetectTolerance;
  int num_directions = 0;
  std::uint64_t seed = 0;

  /// The accepted ellipsoid; throws std::logic_error on reject.
  Ellipsoid recovered() const;
};

/// Runs estimate_e then quadratic_fit. Rejection is a verdict, never an error.
EllipsoidReport is_ellipsoid(const Body& body, double tol_linear, double tol_quadratic,
                             int num_directions, std::uint64_t seed);

struct ConsistencyReport {
  double max_error = 0.0;  // max relative section error, recovered vs input
  std::vector<double> constants;  // per-probe A / ((h+ - t)(h- + t))^{(n-1)/2} * (w/2)^n
  double constant_spread = 0.0;   // (max - min) / mean of constants
  bool constant_direction_independent = false;  // spread < 1e-8
  int num_probes = 0;
};

/// Compares the closed-form sections of the recovered ellipsoid with the input
/// body's exact engine at random (xi, t) probes inside the inner 90% of each chord.
ConsistencyReport section_consistency_check(const Body& body, const EllipsoidReport& report,
                                            int num_probes, std::uint64_t seed);

}  // namespace tomoslice
