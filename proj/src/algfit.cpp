#include "tomoslice/algfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tomoslice {

const char* to_string(RootVerdict verdict) {
  switch (verdict) {
    case RootVerdict::Conforms:
      return "conforms";
    case RootVerdict::Nonconforming:
      return "nonconforming";
    case RootVerdict::StructurallyInfeasible:
      return "structurally-infeasible";
  }
  return "unknown";
}

double AlgebraicFitReport::evaluate(double t) const {
  return chebyshev::evaluate(coefficients, map.to_s(t));
}

AlgebraicFitReport fit_power_polynomial(const SectionProfile& profile, int m, int degree) {
  if (m < 1) throw std::invalid_argument("power m must be at least 1");
  if (degree < 0) throw std::invalid_argument("degree must be non-negative");
  const auto count = static_cast<int>(profile.grid.size());
  if (count != static_cast<int>(profile.values.size()))
    throw std::invalid_argument("profile grid and values differ in length");
  if (degree + 1 > count) throw std::invalid_argument("degree + 1 exceeds the sample count");
  if (count < 2 * (degree + 1))
    throw std::invalid_argument("fit needs at least 2(degree + 1) samples");

  Vector target(count);
  for (int i = 0; i < count; ++i) target[i] = std::pow(profile.values[i], m);
  if (target.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("profile is identically zero");

  AlgebraicFitReport report{profile.xi, profile.n, m, degree, {}, {profile.grid.front(), profile.grid.back()},
                            profile.grid, 0.0, false, std::nullopt};
  std::vector<double> s(profile.grid.size());
  for (size_t i = 0; i < s.size(); ++i) s[i] = report.map.to_s(profile.grid[i]);
  const Matrix design = chebyshev::vandermonde(s, degree);
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < degree + 1) throw RankDeficient("Chebyshev design matrix is rank deficient");
  const Vector coeffs = qr.solve(target);
  report.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
  report.relative_residual = (design * coeffs - target).norm() / target.norm();
  report.degree_bound_ok = degree <= m * (profile.n - 1);
  return report;
}

double MinimalPowerSearch::best_residual() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : attempts) best = std::min(best, a.relative_residual);
  return best;
}

MinimalPowerSearch detect_min_m(const SectionProfile& profile, int m_max, double tol) {
  if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  MinimalPowerSearch search;
  for (int m = 1; m <= m_max; ++m) {
    search.attempts.push_back(fit_power_polynomial(profile, m, m * (profile.n - 1)));
    if (search.attempts.back().relative_residual < tol) {
      search.accepted = search.attempts.back();
      break;
    }
  }
  return search;
}

DegreeCheck degree_bound_check(const AlgebraicFitReport& report, int n) {
  DegreeCheck check;
  check.bound = report.m * (n - 1);
  double biggest = 0.0;
  for (double c : report.coefficients) biggest = std::max(biggest, std::abs(c));
  for (int j = static_cast<int>(report.coefficients.size()) - 1; j >= 0; --j) {
    if (std::abs(report.coefficients[j]) > 1e-9 * biggest) {
      check.effective_degree = j;
      break;
    }
  }
  check.ok = check.effective_degree <= check.bound;
  return check;
}

namespace {

// Newton refinement of a simple root of a Chebyshev series.
double polish_root(const std::vector<double>& series, double s) {
  const auto slope = chebyshev::derivative(series);
  for (int iter = 0; iter < 50; ++iter) {
    const double d = chebyshev::evaluate(slope, s);
    if (d == 0.0) break;
    const double step = chebyshev::evaluate(series, s) / d;
    s -= step;
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(s))) break;
  }
  return s;
}

}  // namespace

RootReport root_structure(const AlgebraicFitReport& report, double h_plus, double h_minus) {
  RootReport out;
  out.h_plus = h_plus;
  out.h_minus = h_minus;
  const int total = report.m * (report.n - 1);
  if (total % 2 != 0) {
    out.verdict = RootVerdict::StructurallyInfeasible;
    return out;
  }
  const int r = total / 2;
  out.multiplicity = r;
  const double width = h_plus + h_minus;
  if (!(width > 0.0)) throw std::invalid_argument("support values give an empty chord interval");

  const auto count = static_cast<Eigen::Index>(report.grid.size());
  Vector fitted(count);
  Vector model(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double t = report.grid[static_cast<size_t>(i)];
    fitted[i] = report.evaluate(t);
    model[i] = std::pow(h_plus - t, r) * std::pow(h_minus + t, r);
  }
  out.scale = fitted.dot(model) / model.dot(model);
  out.mismatch = (fitted - out.scale * model).norm() / fitted.norm();
  out.normalized_constant =
      std::pow(std::abs(out.scale), 1.0 / report.m) * std::pow(0.5 * width, report.n);
  out.verdict = out.mismatch < 1e-8 ? RootVerdict::Conforms : RootVerdict::Nonconforming;

  // A root of order r is a simple root of the (r-1)-th derivative.
  std::vector<double> series = report.coefficients;
  for (int d = 1; d < r; ++d) series = chebyshev::derivative(series);
  std::vector<double> roots;
  try {
    roots = chebyshev::real_roots(series);
  } catch (const std::invalid_argument&) {
    roots.clear();
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (roots.empty()) {
    out.root_plus = out.root_minus = nan;
    out.root_plus_error = out.root_minus_error = std::numeric_limits<double>::infinity();
    return out;
  }
  out.root_plus = report.map.to_t(polish_root(series, roots.back()));
  out.root_minus = report.map.to_t(polish_root(series, roots.front()));
  out.root_plus_error = std::abs(out.root_plus - h_plus) / width;
  out.root_minus_error = std::abs(out.root_minus + h_minus) / width;
  return out;
}

AsymptoticReport exponent_estimate(const Body& body, const Direction& xi, double delta_min,
                                   double delta_max, int num_points) {
  if (std::holds_alternative<Polytope>(body))
    throw std::invalid_argument("boundary exponent needs a strictly convex body");
  if (!(delta_min > 0.0 && delta_min < delta_max && delta_max <= 0.1))
    throw std::invalid_argument("window must satisfy 0 < delta_min < delta_max <= 0.1");
  if (num_points < 12) throw std::invalid_argument("exponent regression needs at least 12 points");

  const SupportValue upper = support(body, xi);
  if (upper.infinite) throw InfiniteSupport("support is infinite in this direction");
  const SupportValue lower = support(body, -xi);

  AsymptoticReport report{xi, upper.value, 0.0, 0.0, delta_min, delta_max, 1.0, {}, {}};
  if (!lower.infinite) report.length_scale = upper.value + lower.value;

  const double ratio = delta_max / delta_min;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (int i = 0; i < num_points; ++i) {
    const double depth =
        report.length_scale * delta_min * std::pow(ratio, static_cast<double>(i) / (num_points - 1));
    const double a = section_volume(body, xi, report.t0 - depth);
    if (!(a >= 1e-300)) throw Underflow("section value underflows inside the regression window");
    report.depths.push_back(depth);
    report.values.push_back(a);
    const double x = std::log(depth);
    const double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double count = num_points;
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  report.estimated_exponent = slope;
  report.estimated_constant = std::exp((sy - slope * sx) / count);
  return report;
}

}  // namespace tomoslice
