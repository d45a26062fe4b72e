#pragma once

// Section volume function A_K(xi, t) = Vol_{n-1}(K ∩ {x : x.xi = t}).

#include <cstdint>
#include <optional>
#include <vector>

#include "tomoslice/bodies.hpp"

namespace tomoslice {

enum class SectionMethod { Exact, MonteCarlo };

/// Samples of t -> A_K(xi, t) on a strictly increasing grid.
struct SectionProfile {
  Direction xi;
  int n = 0;
  std::vector<double> grid;
  std::vector<double> values;
  SectionMethod method = SectionMethod::Exact;
};

/// Closed form omega_{n-1} det(M)^{-1/2} hbar^{-n} (hbar^2 - (t - c.xi)^2)^{(n-1)/2};
/// zero outside the chord interval.
double section_volume_ellipsoid(const Ellipsoid& body, const Direction& xi, double t);

/// Exact slice of a polytope: chord length (n = 2) or polygon area (n = 3).
/// A plane containing a facet returns that facet's measure.
double section_volume_polytope(const Polytope& body, const Direction& xi, double t);

/// True when the restriction of the quadric form to xi^perp is positive definite,
/// i.e. every slice orthogonal to xi is bounded.
bool quadric_slice_bounded(const QuadricDomain& body, const Direction& xi);

/// Exact slice of a quadric domain by reduction to an (n-1)-ellipsoid in the plane.
/// Throws UnboundedSlice when quadric_slice_bounded is false.
double section_volume_quadric(const QuadricDomain& body, const Direction& xi, double t);

/// Dispatches to the exact engine for the body type.
double section_volume(const Body& body, const Direction& xi, double t);

/// Offsets t at which the slice combinatorics change (vertex projections for
/// polytopes); empty for smooth bodies.
std::vector<double> section_breakpoints(const Body& body, const Direction& xi);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long long hits = 0;
  long long samples = 0;
};

/// Independent slab oracle: Vol_n(K ∩ {|x.xi - t| <= h}) / (2h) by rejection sampling
/// in an oriented box (slab x in-plane support extents). Deterministic for a fixed
/// seed regardless of worker count. Unbounded bodies need a truncation box.
MonteCarloEstimate section_volume_mc(const Body& body, const Direction& xi, double t,
                                     double slab_halfwidth, long long samples,
                                     std::uint64_t seed,
                                     const std::optional<Box>& truncation = std::nullopt);

/// Lobatto-spaced profile on [t_min + margin w, t_max - margin w], w the chord width.
/// Requires num_points >= 16 and 0 <= margin < 0.5.
SectionProfile profile(const Body& body, const Direction& xi, int num_points, double margin);

/// Lobatto-spaced profile on an explicit window [lo, hi] inside the chord interval;
/// used for unbounded bodies.
SectionProfile profile_window(const Body& body, const Direction& xi, double lo, double hi,
                              int num_points);

const char* to_string(SectionMethod method);

}  // namespace tomoslice
