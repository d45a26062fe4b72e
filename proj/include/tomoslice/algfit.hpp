#pragma once

// Per-direction detection of the relation q(xi) A^m(xi, t) + p(xi, t) = 0.
//
// At a fixed direction q(xi) is a scalar, so the observable object is p/q: the
// least-squares polynomial in t that reproduces A^m. Fits use a Chebyshev basis on
// the profile window mapped to s in [-1, 1].

#include <optional>
#include <vector>

#include "tomoslice/bodies.hpp"
#include "tomoslice/chebyshev.hpp"
#include "tomoslice/sections.hpp"

namespace tomoslice {

enum class RootVerdict { Conforms, Nonconforming, StructurallyInfeasible };

const char* to_string(RootVerdict verdict);

/// Comparison of a fitted p with C (h+ - t)^r (h- + t)^r, r = m(n-1)/2.
struct RootReport {
  RootVerdict verdict = RootVerdict::StructurallyInfeasible;
  int multiplicity = 0;  // r, expected order of each root
  double h_plus = 0.0;   // h_K(xi)
  double h_minus = 0.0;  // h_K(-xi)
  double scale = 0.0;    // least-squares C(xi)
  /// C(xi)^{1/m} ((h+ + h-)/2)^n: the coefficient of (1 - s^2)^{(n-1)/2} ds, which is
  /// direction independent for ellipsoids.
  double normalized_constant = 0.0;
  double mismatch = 0.0;  // |p - C g| / |p| on the fit grid
  double root_plus = 0.0;
  double root_minus = 0.0;
  /// |root - expected| in units of the chord width h+ + h-.
  double root_plus_error = 0.0;
  double root_minus_error = 0.0;
};

struct AlgebraicFitReport {
  Direction xi;
  int n = 0;
  int m = 1;
  int degree = 0;
  std::vector<double> coefficients;  // Chebyshev coefficients in s
  chebyshev::AffineMap map;          // t <-> s
  std::vector<double> grid;          // t values used in the fit
  double relative_residual = 0.0;    // |fit - A^m|_2 / |A^m|_2
  bool degree_bound_ok = false;      // degree <= m(n-1)
  std::optional<RootReport> root_report;

  double evaluate(double t) const;
};

/// Least-squares fit of A^m by T_0..T_degree. Requires at least 2(degree+1)
/// samples and a profile that is not identically zero.
AlgebraicFitReport fit_power_polynomial(const SectionProfile& profile, int m, int degree);

struct MinimalPowerSearch {
  std::optional<AlgebraicFitReport> accepted;
  std::vector<AlgebraicFitReport> attempts;  // m = 1 .. last tried
  double best_residual() const;
};

/// Tries m = 1..m_max with degree m(n-1) and accepts the first fit below tol.
MinimalPowerSearch detect_min_m(const SectionProfile& profile, int m_max, double tol);

struct DegreeCheck {
  int effective_degree = 0;  // highest index with |c_j| > 1e-9 max|c|
  int bound = 0;             // m(n-1)
  bool ok = false;
};

DegreeCheck degree_bound_check(const AlgebraicFitReport& report, int n);

/// Fits the single scalar C(xi) and locates the roots of p near the chord ends as
/// simple roots of the (r-1)-th derivative. m(n-1) odd yields StructurallyInfeasible.
RootReport root_structure(const AlgebraicFitReport& report, double h_plus, double h_minus);

struct AsymptoticReport {
  Direction xi;
  double t0 = 0.0;  // h_K(xi)
  double estimated_exponent = 0.0;
  double estimated_constant = 0.0;
  double delta_min = 0.0;  // window in units of length_scale
  double delta_max = 0.0;
  double length_scale = 1.0;   // chord width, or 1 for unbounded chords
  std::vector<double> depths;  // t0 - t, absolute units
  std::vector<double> values;  // A_K(xi, t0 - depth)
};

/// Log-log regression of A against the depth t0 - t below the support value at
/// log-spaced depths. Only strictly convex bodies (ellipsoids, quadrics) qualify.
AsymptoticReport exponent_estimate(const Body& body, const Direction& xi, double delta_min,
                                   double delta_max, int num_points);

}  // namespace tomoslice
