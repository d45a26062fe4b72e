#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>

#include "tomoslice/chebyshev.hpp"
#include "tomoslice/quadrature.hpp"
#include "tomoslice/sampling.hpp"

using namespace tomoslice;

TEST_CASE("Gauss-Legendre integrates polynomials up to degree 2n-1 exactly") {
  for (int n = 1; n <= 24; ++n) {
    const auto rule = gauss_legendre(n);
    CHECK(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      const double got = integrate(rule, -1.0, 1.0, [p](double x) { return std::pow(x, p); });
      CHECK(std::abs(got - exact) < 1e-14);
    }
  }
}

TEST_CASE("Gauss-Legendre converges spectrally on analytic integrands") {
  const auto rule = gauss_legendre(64);
  const double got = integrate(rule, 0.0, std::numbers::pi / 2, [](double x) { return std::cos(x); });
  CHECK(std::abs(got - 1.0) < 1e-15);
}

TEST_CASE("piecewise integration restores exactness across kinks") {
  const auto rule = gauss_legendre(2);
  const std::vector<double> cuts{0.0, -5.0, 7.0};
  const double got = integrate_piecewise(rule, -1.0, 2.0, cuts, [](double x) { return std::abs(x); });
  CHECK(got == doctest::Approx(2.5).epsilon(1e-15));
  const double unsplit = integrate(rule, -1.0, 2.0, [](double x) { return std::abs(x); });
  CHECK(std::abs(unsplit - 2.5) > 1e-3);
}

TEST_CASE("gauss_legendre rejects non-positive orders") {
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("Chebyshev Vandermonde matches the trigonometric definition") {
  const std::vector<double> s{-1.0, -0.3, 0.0, 0.41, 1.0};
  const auto v = chebyshev::vandermonde(s, 7);
  for (size_t i = 0; i < s.size(); ++i)
    for (int k = 0; k <= 7; ++k)
      CHECK(v(static_cast<Eigen::Index>(i), k) ==
            doctest::Approx(std::cos(k * std::acos(s[i]))).epsilon(1e-13));
}

TEST_CASE("Clenshaw evaluation agrees with the Vandermonde rows") {
  const std::vector<double> coeffs{0.3, -1.2, 0.7, 2.5, -0.05};
  const std::vector<double> s{-0.9, -0.2, 0.5, 0.99};
  const auto v = chebyshev::vandermonde(s, 4);
  const Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), 5);
  for (size_t i = 0; i < s.size(); ++i)
    CHECK(chebyshev::evaluate(coeffs, s[i]) ==
          doctest::Approx(v.row(static_cast<Eigen::Index>(i)).dot(c)).epsilon(1e-14));
}

TEST_CASE("Chebyshev derivative") {
  // d/ds T_3 = 12 s^2 - 3 = 6 T_2 + 3 T_0
  const std::vector<double> t3{0.0, 0.0, 0.0, 1.0};
  const auto d = chebyshev::derivative(t3);
  REQUIRE(d.size() == 3);
  CHECK(d[0] == doctest::Approx(3.0));
  CHECK(d[1] == doctest::Approx(0.0));
  CHECK(d[2] == doctest::Approx(6.0));
  CHECK(chebyshev::derivative(std::vector<double>{4.0}) == std::vector<double>{0.0});
}

TEST_CASE("colleague-matrix roots") {
  const auto roots = chebyshev::real_roots(std::vector<double>{0.0, 0.0, 0.0, 1.0});
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(-std::sqrt(3.0) / 2).epsilon(1e-14));
  CHECK(std::abs(roots[1]) < 1e-14);
  CHECK(roots[2] == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));

  // 1 + s^2 = 1.5 T_0 + 0.5 T_2 has no real roots; trailing zeros are ignored.
  CHECK(chebyshev::real_roots(std::vector<double>{1.5, 0.0, 0.5, 0.0, 0.0}).empty());
  CHECK_THROWS_AS(chebyshev::real_roots(std::vector<double>{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("Lobatto grid is ascending, symmetric, and hits both endpoints") {
  for (int n : {16, 17, 64}) {
    const auto g = chebyshev::lobatto_grid(-2.0, 3.0, n);
    CHECK(g.front() == -2.0);
    CHECK(g.back() == 3.0);
    for (int i = 1; i < n; ++i) CHECK(g[i] > g[i - 1]);
    for (int i = 0; i < n; ++i) CHECK(g[i] - 0.5 == doctest::Approx(-(g[n - 1 - i] - 0.5)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(chebyshev::lobatto_grid(1.0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("direction sets") {
  const auto fib = fibonacci_sphere(200);
  for (const auto& d : fib) CHECK(std::abs(d.vec().norm() - 1.0) < 1e-12);

  const auto a = uniform_directions(5, 30, 9);
  const auto b = uniform_directions(5, 30, 9);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].vec() == b[i].vec());

  const auto pairs = antithetic_directions(4, 10, 3);
  REQUIRE(pairs.size() == 10);
  for (size_t i = 0; i < pairs.size(); i += 2) CHECK(pairs[i + 1].vec() == -pairs[i].vec());
}

TEST_CASE("parallel_for output does not depend on the worker count") {
  std::vector<double> one(1000);
  std::vector<double> many(1000);
  setenv("TOMOSLICE_THREADS", "1", 1);
  parallel_for(one.size(), [&](size_t i) { one[i] = std::sin(static_cast<double>(i)); });
  setenv("TOMOSLICE_THREADS", "4", 1);
  CHECK(worker_count() == 4);
  parallel_for(many.size(), [&](size_t i) { many[i] = std::sin(static_cast<double>(i)); });
  unsetenv("TOMOSLICE_THREADS");
  CHECK(one == many);

  setenv("TOMOSLICE_THREADS", "3", 1);
  CHECK_THROWS_AS(parallel_for(10, [](size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  unsetenv("TOMOSLICE_THREADS");
}
