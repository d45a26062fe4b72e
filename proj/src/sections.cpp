#include "tomoslice/sections.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tomoslice/chebyshev.hpp"
#include "tomoslice/sampling.hpp"

namespace tomoslice {

namespace {

constexpr long long kBlockSize = 1 << 16;

void require_dim(int expected, const Direction& xi) {
  if (xi.dim() != expected) throw DimensionMismatch(expected, xi.dim());
}

// Fast membership used inside the sampling loop; avoids Eigen temporaries.
bool ellipsoid_contains(const Ellipsoid& e, const Vector& x, Vector& scratch) {
  scratch = x - e.center();
  const Matrix& m = e.shape();
  double q = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) q += scratch[j] * m.col(j).dot(scratch);
  return q <= 1.0;
}

}  // namespace

const char* to_string(SectionMethod method) {
  return method == SectionMethod::Exact ? "exact" : "monte-carlo";
}

double section_volume_ellipsoid(const Ellipsoid& body, const Direction& xi, double t) {
  require_dim(body.dim(), xi);
  const int n = body.dim();
  const double hbar = body.centered_support(xi.vec());
  const double d = t - body.center().dot(xi.vec());
  if (!(std::abs(d) < hbar)) return 0.0;
  const double gap = (hbar - d) * (hbar + d);
  return unit_ball_volume(n - 1) * body.axes_product() * std::pow(hbar, -n) *
         std::pow(gap, 0.5 * (n - 1));
}

double section_volume_polytope(const Polytope& body, const Direction& xi, double t) {
  require_dim(body.dim(), xi);
  const auto& verts = body.vertices();
  const Vector& dir = xi.vec();
  std::vector<double> level(verts.size());
  for (size_t i = 0; i < verts.size(); ++i) level[i] = verts[i].dot(dir) - t;
  const double top = *std::max_element(level.begin(), level.end());
  const double bottom = *std::min_element(level.begin(), level.end());
  if (top < 0.0 || bottom > 0.0) return 0.0;

  std::vector<Vector> points;
  for (size_t i = 0; i < verts.size(); ++i)
    if (level[i] == 0.0) points.push_back(verts[i]);
  for (const auto& [i, j] : body.edges()) {
    const double a = level[i];
    const double b = level[j];
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0))
      points.push_back(verts[i] + (verts[j] - verts[i]) * (a / (a - b)));
  }

  const Matrix basis = orthonormal_complement(xi);
  if (body.dim() == 2) {
    if (points.size() < 2) return 0.0;
    double lo = points.front().dot(basis.col(0));
    double hi = lo;
    for (const auto& p : points) {
      const double s = p.dot(basis.col(0));
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    return hi - lo;
  }

  if (points.size() < 3) return 0.0;
  std::vector<std::pair<double, double>> planar;
  planar.reserve(points.size());
  double cu = 0.0;
  double cw = 0.0;
  for (const auto& p : points) {
    planar.emplace_back(p.dot(basis.col(0)), p.dot(basis.col(1)));
    cu += planar.back().first;
    cw += planar.back().second;
  }
  cu /= static_cast<double>(planar.size());
  cw /= static_cast<double>(planar.size());
  std::sort(planar.begin(), planar.end(), [&](const auto& p, const auto& q) {
    return std::atan2(p.second - cw, p.first - cu) < std::atan2(q.second - cw, q.first - cu);
  });
  double twice_area = 0.0;
  for (size_t i = 0; i < planar.size(); ++i) {
    const auto& [x0, y0] = planar[i];
    const auto& [x1, y1] = planar[(i + 1) % planar.size()];
    twice_area += (x0 - cu) * (y1 - cw) - (x1 - cu) * (y0 - cw);
  }
  return 0.5 * std::abs(twice_area);
}

bool quadric_slice_bounded(const QuadricDomain& body, const Direction& xi) {
  require_dim(body.dim(), xi);
  const Matrix basis = orthonormal_complement(xi);
  const Matrix restricted = basis.transpose() * body.quadratic_part() * basis;
  Eigen::LLT<Matrix> llt(restricted);
  return llt.info() == Eigen::Success;
}

double section_volume_quadric(const QuadricDomain& body, const Direction& xi, double t) {
  require_dim(body.dim(), xi);
  const int n = body.dim();
  const Matrix basis = orthonormal_complement(xi);
  const Matrix q = body.quadratic_part();
  const Vector b = body.linear_part();
  const Vector& dir = xi.vec();

  // x = t xi + U y turns the defining form into y^T A y + g.y + k.
  const Matrix a = basis.transpose() * q * basis;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw UnboundedSlice("quadric slice is unbounded for this direction");
  const Vector qxi = q * dir;
  const Vector g = 2.0 * t * (basis.transpose() * qxi) + basis.transpose() * b;
  const double k = t * t * dir.dot(qxi) + t * b.dot(dir) + body.constant_part();
  const Vector solved = llt.solve(g);
  const double rho = 0.25 * g.dot(solved) - k;
  if (!(rho > 0.0)) return 0.0;
  if (body.kind() == QuadricDomain::Kind::Hyperboloid) {
    const Vector center = t * dir - 0.5 * (basis * solved);
    if (!(center[n - 1] > 0.0)) return 0.0;
  }
  const Matrix l = llt.matrixL();
  const double sqrt_det = l.diagonal().prod();
  return unit_ball_volume(n - 1) * std::pow(rho, 0.5 * (n - 1)) / sqrt_det;
}

double section_volume(const Body& body, const Direction& xi, double t) {
  return std::visit(
      [&](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return section_volume_ellipsoid(b, xi, t);
        } else if constexpr (std::is_same_v<T, Polytope>) {
          return section_volume_polytope(b, xi, t);
        } else {
          return section_volume_quadric(b, xi, t);
        }
      },
      body);
}

std::vector<double> section_breakpoints(const Body& body, const Direction& xi) {
  std::vector<double> cuts;
  if (const auto* poly = std::get_if<Polytope>(&body)) {
    require_dim(poly->dim(), xi);
    for (const auto& v : poly->vertices()) cuts.push_back(v.dot(xi.vec()));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }
  return cuts;
}

MonteCarloEstimate section_volume_mc(const Body& body, const Direction& xi, double t,
                                     double slab_halfwidth, long long samples,
                                     std::uint64_t seed, const std::optional<Box>& truncation) {
  const int n = dimension(body);
  require_dim(n, xi);
  if (!(slab_halfwidth > 0.0)) throw std::invalid_argument("slab half-width must be positive");
  if (samples <= 0) throw std::invalid_argument("sample count must be positive");
  if (truncation && (truncation->lo.size() != n || truncation->hi.size() != n))
    throw DimensionMismatch(n, static_cast<int>(truncation->lo.size()));

  auto extent = [&](const Vector& u) {
    double h = std::numeric_limits<double>::infinity();
    const SupportValue s = support(body, u);
    if (!s.infinite) h = s.value;
    if (truncation) h = std::min(h, truncation->support(u));
    return h;
  };

  // Early exit when the slab misses the body entirely.
  const double upper = extent(xi.vec());
  const double lower = -extent(-xi.vec());
  if (t - slab_halfwidth > upper || t + slab_halfwidth < lower) return {0.0, 0.0, 0, samples};

  const Matrix basis = orthonormal_complement(xi);
  Vector lo(n - 1);
  Vector width(n - 1);
  for (int j = 0; j < n - 1; ++j) {
    const double hi_j = extent(basis.col(j));
    const double lo_j = -extent(-basis.col(j));
    if (!std::isfinite(hi_j) || !std::isfinite(lo_j))
      throw InfiniteSupport("unbounded body needs a truncation box for the slab oracle");
    lo[j] = lo_j;
    width[j] = hi_j - lo_j;
    if (!(width[j] > 0.0)) throw std::invalid_argument("zero-volume bounding box");
  }

  const long long blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<long long> hits(static_cast<size_t>(blocks), 0);
  const auto* ellipsoid = std::get_if<Ellipsoid>(&body);
  parallel_for(static_cast<size_t>(blocks), [&](size_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const long long begin = static_cast<long long>(block) * kBlockSize;
    const long long end = std::min(samples, begin + kBlockSize);
    Vector y(n - 1);
    Vector x(n);
    Vector scratch(n);
    long long count = 0;
    for (long long i = begin; i < end; ++i) {
      const double s = t + slab_halfwidth * (2.0 * unit(rng) - 1.0);
      for (int j = 0; j < n - 1; ++j) y[j] = lo[j] + width[j] * unit(rng);
      x.noalias() = basis * y;
      x += s * xi.vec();
      if (truncation && !truncation->contains(x)) continue;
      const bool inside = ellipsoid ? ellipsoid_contains(*ellipsoid, x, scratch) : contains(body, x);
      if (inside) ++count;
    }
    hits[block] = count;
  });

  long long total = 0;
  for (long long h : hits) total += h;
  const double p = static_cast<double>(total) / static_cast<double>(samples);
  const double area = width.prod();
  return {p * area, area * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), total, samples};
}

SectionProfile profile(const Body& body, const Direction& xi, int num_points, double margin) {
  if (num_points < 16) throw std::invalid_argument("profile needs at least 16 points");
  if (!(margin >= 0.0 && margin < 0.5)) throw std::invalid_argument("margin must lie in [0, 0.5)");
  const ChordInterval chord = chord_interval(body, xi);
  const double w = chord.width();
  return profile_window(body, xi, chord.lo + margin * w, chord.hi - margin * w, num_points);
}

SectionProfile profile_window(const Body& body, const Direction& xi, double lo, double hi,
                              int num_points) {
  const int n = dimension(body);
  require_dim(n, xi);
  if (num_points < 16) throw std::invalid_argument("profile needs at least 16 points");
  if (!(lo < hi)) throw std::invalid_argument("profile window must satisfy lo < hi");
  const SupportValue upper = support(body, xi);
  const SupportValue lower = support(body, -xi);
  if ((!upper.infinite && hi > upper.value) || (!lower.infinite && lo < -lower.value))
    throw std::invalid_argument("profile window leaves the chord interval");

  SectionProfile out{xi, n, chebyshev::lobatto_grid(lo, hi, num_points), {}, SectionMethod::Exact};
  out.values.assign(out.grid.size(), 0.0);
  parallel_for(out.grid.size(), [&](size_t i) { out.values[i] = section_volume(body, xi, out.grid[i]); });
  return out;
}

}  // namespace tomoslice
