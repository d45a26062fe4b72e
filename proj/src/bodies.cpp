#include "tomoslice/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tomoslice {

namespace {

constexpr double kUnitTolerance = 1e-12;

void require_orthogonal(const Matrix& r, int n) {
  if (r.rows() != n || r.cols() != n) throw DimensionMismatch(n, static_cast<int>(r.rows()));
  const double defect = (r.transpose() * r - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > 1e-10) throw std::invalid_argument("rotation matrix is not orthogonal");
}

int matrix_rank(const Matrix& a, double threshold) {
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(threshold);
  return static_cast<int>(lu.rank());
}

}  // namespace

// ---------------------------------------------------------------------------
// Direction

Direction::Direction(Vector components) : v_(std::move(components)) {
  if (v_.size() < 1) throw std::invalid_argument("direction must be non-empty");
  if (!v_.allFinite()) throw std::invalid_argument("direction has non-finite components");
  if (std::abs(v_.norm() - 1.0) > kUnitTolerance)
    throw std::invalid_argument("direction is not a unit vector");
}

Direction Direction::normalized(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("cannot normalise a zero or non-finite vector");
  return Direction(v / norm, Unchecked{});
}

Direction Direction::axis(int n, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("axis index out of range");
  return Direction(Vector::Unit(n, i), Unchecked{});
}

Direction Direction::operator-() const { return Direction(-v_, Unchecked{}); }

// ---------------------------------------------------------------------------
// Box

bool Box::contains(const Vector& x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

double Box::support(const Vector& xi) const {
  double h = 0.0;
  for (Eigen::Index i = 0; i < xi.size(); ++i) h += std::max(lo[i] * xi[i], hi[i] * xi[i]);
  return h;
}

// ---------------------------------------------------------------------------
// Ellipsoid

Ellipsoid::Ellipsoid(Vector center, Matrix shape)
    : center_(std::move(center)), shape_(std::move(shape)) {
  const auto n = center_.size();
  if (n < 2) throw std::invalid_argument("ellipsoid dimension must be at least 2");
  if (shape_.rows() != n || shape_.cols() != n)
    throw DimensionMismatch(static_cast<int>(n), static_cast<int>(shape_.rows()));
  if (!center_.allFinite() || !shape_.allFinite())
    throw std::invalid_argument("ellipsoid has non-finite parameters");
  const double scale = std::max(1.0, shape_.cwiseAbs().maxCoeff());
  if ((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("ellipsoid shape matrix is not symmetric");

  Eigen::LLT<Matrix> llt(shape_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("ellipsoid shape matrix is not positive definite");
  const Matrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(l(i, i) > 0.0))
      throw std::invalid_argument("ellipsoid shape matrix is not positive definite");
  }
  inverse_shape_ = llt.solve(Matrix::Identity(n, n));
  inverse_shape_ = 0.5 * (inverse_shape_ + inverse_shape_.transpose()).eval();
  axes_product_ = 1.0 / l.diagonal().prod();
}

Ellipsoid Ellipsoid::ball(int n, double radius) { return ball(Vector::Zero(n), radius); }

Ellipsoid Ellipsoid::ball(Vector center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  const auto n = center.size();
  Matrix shape = Matrix::Identity(n, n) / (radius * radius);
  return Ellipsoid(std::move(center), std::move(shape));
}

Ellipsoid Ellipsoid::axis_aligned(const Vector& semi_axes, Vector center) {
  if ((semi_axes.array() <= 0.0).any())
    throw std::invalid_argument("semi-axes must be positive");
  Matrix shape = semi_axes.array().square().inverse().matrix().asDiagonal();
  return Ellipsoid(std::move(center), std::move(shape));
}

Ellipsoid Ellipsoid::axis_aligned(const Vector& semi_axes) {
  return axis_aligned(semi_axes, Vector::Zero(semi_axes.size()));
}

double Ellipsoid::centered_support(const Vector& xi) const {
  return std::sqrt(xi.dot(inverse_shape_ * xi));
}

double Ellipsoid::support(const Vector& xi) const {
  if (xi.size() != center_.size())
    throw DimensionMismatch(dim(), static_cast<int>(xi.size()));
  return center_.dot(xi) + centered_support(xi);
}

double Ellipsoid::form(const Vector& x) const {
  const Vector d = x - center_;
  return d.dot(shape_ * d);
}

bool Ellipsoid::contains(const Vector& x) const { return form(x) <= 1.0; }

Vector Ellipsoid::support_point(const Vector& xi) const {
  const Vector w = inverse_shape_ * xi;
  return center_ + w / std::sqrt(xi.dot(w));
}

Box Ellipsoid::bounding_box() const {
  const Vector half = inverse_shape_.diagonal().cwiseSqrt();
  return {center_ - half, center_ + half};
}

Ellipsoid Ellipsoid::translated(const Vector& v) const {
  if (v.size() != center_.size()) throw DimensionMismatch(dim(), static_cast<int>(v.size()));
  return Ellipsoid(center_ + v, shape_);
}

Ellipsoid Ellipsoid::rotated(const Matrix& rotation) const {
  require_orthogonal(rotation, dim());
  Matrix shape = rotation * shape_ * rotation.transpose();
  shape = 0.5 * (shape + shape.transpose()).eval();
  return Ellipsoid(rotation * center_, std::move(shape));
}

Ellipsoid Ellipsoid::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("scale factor must be positive");
  return Ellipsoid(lambda * center_, shape_ / (lambda * lambda));
}

// ---------------------------------------------------------------------------
// Polytope

Polytope::Polytope(std::vector<Vector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw std::invalid_argument("polytope needs vertices");
  dim_ = static_cast<int>(vertices_.front().size());
  if (dim_ != 2 && dim_ != 3)
    throw std::invalid_argument("polytopes are supported in dimensions 2 and 3 only");
  const int count = static_cast<int>(vertices_.size());
  if (count < dim_ + 1) throw std::invalid_argument("polytope needs at least n+1 vertices");

  double scale = 0.0;
  for (const auto& v : vertices_) {
    if (v.size() != dim_) throw DimensionMismatch(dim_, static_cast<int>(v.size()));
    if (!v.allFinite()) throw std::invalid_argument("polytope vertex is not finite");
    scale = std::max(scale, v.cwiseAbs().maxCoeff());
  }
  scale = std::max(scale, 1.0);

  Matrix spread(dim_, count - 1);
  for (int i = 1; i < count; ++i) spread.col(i - 1) = vertices_[i] - vertices_[0];
  if (matrix_rank(spread, 1e-12) < dim_)
    throw std::invalid_argument("polytope vertices are not affinely independent");

  // Brute-force facet enumeration: a hyperplane through n vertices is a facet
  // plane when every vertex lies on one side of it.
  auto try_plane = [&](Vector normal, double offset) {
    const double eps = 1e-10 * normal.norm() * scale;
    bool below = true;
    bool above = true;
    for (const auto& v : vertices_) {
      const double s = normal.dot(v) - offset;
      below = below && s <= eps;
      above = above && s >= -eps;
    }
    if (!below && !above) return;
    if (!below) {
      normal = -normal;
      offset = -offset;
    }
    const Vector unit = normal.normalized();
    for (const auto& f : facets_)
      if ((f.normal.normalized() - unit).norm() < 1e-9) return;
    Facet facet{normal, offset, {}};
    for (int i = 0; i < count; ++i)
      if (std::abs(normal.dot(vertices_[i]) - offset) <= eps) facet.vertices.push_back(i);
    facets_.push_back(std::move(facet));
  };

  if (dim_ == 2) {
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j) {
        const Vector d = vertices_[j] - vertices_[i];
        if (d.norm() <= 1e-14 * scale) throw std::invalid_argument("duplicate polytope vertex");
        Vector normal(2);
        normal << d[1], -d[0];
        try_plane(normal, normal.dot(vertices_[i]));
      }
  } else {
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j) {
        const Eigen::Vector3d a = vertices_[j] - vertices_[i];
        if (a.norm() <= 1e-14 * scale) throw std::invalid_argument("duplicate polytope vertex");
        for (int k = j + 1; k < count; ++k) {
          const Eigen::Vector3d b = vertices_[k] - vertices_[i];
          const Eigen::Vector3d normal = a.cross(b);
          if (normal.norm() <= 1e-12 * a.norm() * b.norm()) continue;
          try_plane(Vector(normal), normal.dot(Eigen::Vector3d(vertices_[i])));
        }
      }
  }

  // A point of the hull is a vertex iff the normals of its active facets span R^n.
  for (int i = 0; i < count; ++i) {
    std::vector<int> active;
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f)
      if (std::find(facets_[f].vertices.begin(), facets_[f].vertices.end(), i) !=
          facets_[f].vertices.end())
        active.push_back(f);
    Matrix normals(dim_, static_cast<int>(active.size()));
    for (int c = 0; c < static_cast<int>(active.size()); ++c)
      normals.col(c) = facets_[active[c]].normal.normalized();
    if (active.size() < static_cast<size_t>(dim_) || matrix_rank(normals, 1e-9) < dim_)
      throw std::invalid_argument("polytope vertex " + std::to_string(i) + " is not extreme");
  }

  if (dim_ == 2) {
    for (const auto& f : facets_) edges_.emplace_back(f.vertices.at(0), f.vertices.at(1));
  } else {
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j) {
        int shared = 0;
        for (const auto& f : facets_) {
          const bool has_i = std::find(f.vertices.begin(), f.vertices.end(), i) != f.vertices.end();
          const bool has_j = std::find(f.vertices.begin(), f.vertices.end(), j) != f.vertices.end();
          if (has_i && has_j) ++shared;
        }
        if (shared >= 2) edges_.emplace_back(i, j);
      }
  }
}

Polytope Polytope::cube(int n, double half_side) {
  return box(Vector::Constant(n, -half_side), Vector::Constant(n, half_side));
}

Polytope Polytope::box(const Vector& lo, const Vector& hi) {
  const int n = static_cast<int>(lo.size());
  if (hi.size() != n) throw DimensionMismatch(n, static_cast<int>(hi.size()));
  std::vector<Vector> corners;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? hi[i] : lo[i];
    corners.push_back(std::move(v));
  }
  return Polytope(std::move(corners));
}

double Polytope::support(const Vector& xi) const {
  if (xi.size() != dim_) throw DimensionMismatch(dim_, static_cast<int>(xi.size()));
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) h = std::max(h, v.dot(xi));
  return h;
}

bool Polytope::contains(const Vector& x) const {
  for (const auto& f : facets_)
    if (f.normal.dot(x) > f.offset) return false;
  return true;
}

Box Polytope::bounding_box() const {
  Vector lo = vertices_.front();
  Vector hi = vertices_.front();
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

Polytope Polytope::translated(const Vector& v) const {
  std::vector<Vector> moved;
  for (const auto& p : vertices_) moved.push_back(p + v);
  return Polytope(std::move(moved));
}

Polytope Polytope::rotated(const Matrix& rotation) const {
  require_orthogonal(rotation, dim_);
  std::vector<Vector> moved;
  for (const auto& p : vertices_) moved.push_back(rotation * p);
  return Polytope(std::move(moved));
}

Polytope Polytope::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("scale factor must be positive");
  std::vector<Vector> moved;
  for (const auto& p : vertices_) moved.push_back(lambda * p);
  return Polytope(std::move(moved));
}

// ---------------------------------------------------------------------------
// QuadricDomain

QuadricDomain::QuadricDomain(Kind kind, Vector axes, double c)
    : kind_(kind), axes_(std::move(axes)), c_(c) {
  if (axes_.size() < 1) throw std::invalid_argument("quadric needs at least one axis");
  if (!axes_.allFinite() || (axes_.array() <= 0.0).any())
    throw std::invalid_argument("quadric axes must be positive");
  if (kind_ == Kind::Hyperboloid && !(c_ > 0.0 && std::isfinite(c_)))
    throw std::invalid_argument("hyperboloid parameter c must be positive");
}

QuadricDomain QuadricDomain::paraboloid(const Vector& axes) {
  return QuadricDomain(Kind::Paraboloid, axes, 0.0);
}

QuadricDomain QuadricDomain::hyperboloid(const Vector& axes, double c) {
  return QuadricDomain(Kind::Hyperboloid, axes, c);
}

SupportValue QuadricDomain::support(const Vector& xi) const {
  const int n = dim();
  if (xi.size() != n) throw DimensionMismatch(n, static_cast<int>(xi.size()));
  const double axial = xi[n - 1];
  double w2 = 0.0;
  for (int j = 0; j < n - 1; ++j) w2 += axes_[j] * axes_[j] * xi[j] * xi[j];
  if (!(axial < 0.0)) return SupportValue::unbounded();
  if (kind_ == Kind::Paraboloid) return SupportValue::finite(w2 / (4.0 * -axial));
  const double cone = c_ * c_ * axial * axial;
  if (w2 > cone) return SupportValue::unbounded();
  return SupportValue::finite(-std::sqrt(cone - w2));
}

bool QuadricDomain::contains(const Vector& x) const {
  const int n = dim();
  if (x.size() != n) throw DimensionMismatch(n, static_cast<int>(x.size()));
  double sum = 0.0;
  for (int j = 0; j < n - 1; ++j) sum += x[j] * x[j] / (axes_[j] * axes_[j]);
  const double axial = x[n - 1];
  if (kind_ == Kind::Paraboloid) return axial >= sum;
  return axial > 0.0 && axial * axial / (c_ * c_) - sum >= 1.0;
}

Matrix QuadricDomain::quadratic_part() const {
  const int n = dim();
  Matrix q = Matrix::Zero(n, n);
  for (int j = 0; j < n - 1; ++j) q(j, j) = 1.0 / (axes_[j] * axes_[j]);
  if (kind_ == Kind::Hyperboloid) q(n - 1, n - 1) = -1.0 / (c_ * c_);
  return q;
}

Vector QuadricDomain::linear_part() const {
  Vector b = Vector::Zero(dim());
  if (kind_ == Kind::Paraboloid) b[dim() - 1] = -1.0;
  return b;
}

double QuadricDomain::constant_part() const { return kind_ == Kind::Hyperboloid ? 1.0 : 0.0; }

// ---------------------------------------------------------------------------
// Body dispatch

int dimension(const Body& body) {
  return std::visit([](const auto& b) { return b.dim(); }, body);
}

bool is_bounded(const Body& body) { return !std::holds_alternative<QuadricDomain>(body); }

SupportValue support(const Body& body, const Vector& xi) {
  return std::visit(
      [&](const auto& b) -> SupportValue {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, QuadricDomain>) {
          return b.support(xi);
        } else {
          return SupportValue::finite(b.support(xi));
        }
      },
      body);
}

SupportValue support(const Body& body, const Direction& xi) { return support(body, xi.vec()); }

ChordInterval chord_interval(const Body& body, const Direction& xi) {
  const SupportValue upper = support(body, xi);
  const SupportValue lower = support(body, -xi);
  if (upper.infinite || lower.infinite)
    throw InfiniteSupport("chord interval is unbounded in this direction");
  return {-lower.value, upper.value};
}

bool contains(const Body& body, const Vector& x) {
  const int n = dimension(body);
  if (x.size() != n) throw DimensionMismatch(n, static_cast<int>(x.size()));
  return std::visit([&](const auto& b) { return b.contains(x); }, body);
}

Box bounding_box(const Body& body) {
  return std::visit(
      [](const auto& b) -> Box {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, QuadricDomain>) {
          throw InfiniteSupport("quadric domains are unbounded");
        } else {
          return b.bounding_box();
        }
      },
      body);
}

Matrix orthonormal_complement(const Direction& xi) {
  const int n = xi.dim();
  Eigen::HouseholderQR<Matrix> qr(Matrix(xi.vec()));
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - 1);
}

double unit_ball_volume(int d) {
  if (d < 0) throw std::invalid_argument("negative dimension");
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

}  // namespace tomoslice
