#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "tomoslice/bodies.hpp"

namespace tomoslice {

/// Deterministic Fibonacci lattice on S^2.
std::vector<Direction> fibonacci_sphere(int count);

/// Seeded uniform directions on S^{n-1} (normalised Gaussian vectors).
std::vector<Direction> uniform_directions(int n, int count, std::uint64_t seed);

/// Seeded uniform directions arranged in antithetic pairs xi, -xi.
std::vector<Direction> antithetic_directions(int n, int count, std::uint64_t seed);

/// Fibonacci lattice for n = 3, seeded uniform directions otherwise.
std::vector<Direction> sample_directions(int n, int count, std::uint64_t seed);

/// Worker cap: TOMOSLICE_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Work is
/// split into contiguous static chunks; callers write results by index so the
/// outcome does not depend on the number of workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tomoslice
