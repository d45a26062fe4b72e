#include "tomoslice/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace tomoslice {

std::vector<Direction> fibonacci_sphere(int count) {
  if (count < 1) throw std::invalid_argument("direction count must be positive");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Direction> dirs;
  dirs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    Vector v(3);
    v << r * std::cos(phi), r * std::sin(phi), z;
    dirs.push_back(Direction::normalized(v));
  }
  return dirs;
}

std::vector<Direction> uniform_directions(int n, int count, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (count < 1) throw std::invalid_argument("direction count must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Direction> dirs;
  dirs.reserve(count);
  while (static_cast<int>(dirs.size()) < count) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    if (v.norm() < 1e-8) continue;
    dirs.push_back(Direction::normalized(v));
  }
  return dirs;
}

std::vector<Direction> antithetic_directions(int n, int count, std::uint64_t seed) {
  const auto base = uniform_directions(n, (count + 1) / 2, seed);
  std::vector<Direction> dirs;
  dirs.reserve(count);
  for (const auto& d : base) {
    dirs.push_back(d);
    if (static_cast<int>(dirs.size()) < count) dirs.push_back(-d);
  }
  return dirs;
}

std::vector<Direction> sample_directions(int n, int count, std::uint64_t seed) {
  return n == 3 ? fibonacci_sphere(count) : uniform_directions(n, count, seed);
}

int worker_count() {
  if (const char* env = std::getenv("TOMOSLICE_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) return cap;
    } catch (const std::exception&) {
      // fall through to hardware concurrency
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    threads.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tomoslice
