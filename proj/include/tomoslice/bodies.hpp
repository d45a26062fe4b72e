#pragma once

// Exact representations of convex bodies in R^n.
//
// Every body exposes the support function h_K(xi) = sup_{x in K} x.xi, an exact
// membership predicate, and (when bounded) an axis-aligned bounding box. Bodies are
// immutable after construction.

#include <Eigen/Dense>

#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include "tomoslice/errors.hpp"

namespace tomoslice {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Unit normal of a hyperplane family {x : x.xi = t}.
class Direction {
 public:
  /// Throws std::invalid_argument unless | |components| - 1 | <= 1e-12.
  explicit Direction(Vector components);

  static Direction normalized(const Vector& v);
  static Direction axis(int n, int i);

  int dim() const { return static_cast<int>(v_.size()); }
  const Vector& vec() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  Direction operator-() const;

 private:
  struct Unchecked {};
  Direction(Vector v, Unchecked) : v_(std::move(v)) {}
  Vector v_;
};

/// Support value, tagged when the supremum is +inf.
struct SupportValue {
  double value = 0.0;
  bool infinite = false;

  static SupportValue finite(double v) { return {v, false}; }
  static SupportValue unbounded() { return {std::numeric_limits<double>::infinity(), true}; }
};

struct Box {
  Vector lo;
  Vector hi;

  bool contains(const Vector& x) const;
  /// Support function of the box.
  double support(const Vector& xi) const;
};

/// Closed interval of hyperplane offsets t meeting the body: (-h(-xi), h(xi)).
struct ChordInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// {x : (x - center)^T M (x - center) <= 1} with M symmetric positive definite.
class Ellipsoid {
 public:
  Ellipsoid(Vector center, Matrix shape);

  static Ellipsoid ball(int n, double radius = 1.0);
  static Ellipsoid ball(Vector center, double radius);
  static Ellipsoid axis_aligned(const Vector& semi_axes, Vector center);
  static Ellipsoid axis_aligned(const Vector& semi_axes);

  int dim() const { return static_cast<int>(center_.size()); }
  const Vector& center() const { return center_; }
  const Matrix& shape() const { return shape_; }
  /// M^{-1}; the centered support satisfies hbar(xi)^2 = xi^T M^{-1} xi.
  const Matrix& inverse_shape() const { return inverse_shape_; }
  /// det(M)^{-1/2}, the product of the semi-axes.
  double axes_product() const { return axes_product_; }

  double centered_support(const Vector& xi) const;
  double support(const Vector& xi) const;
  /// Value of the defining quadratic form (x-c)^T M (x-c).
  double form(const Vector& x) const;
  bool contains(const Vector& x) const;
  /// Boundary point where the outer normal is xi.
  Vector support_point(const Vector& xi) const;
  Box bounding_box() const;

  Ellipsoid translated(const Vector& v) const;
  /// Image under an orthogonal map R: x -> R x.
  Ellipsoid rotated(const Matrix& rotation) const;
  Ellipsoid scaled(double lambda) const;

 private:
  Vector center_;
  Matrix shape_;
  Matrix inverse_shape_;
  double axes_product_ = 1.0;
};

/// Convex hull of a vertex list in dimension 2 or 3. Every vertex must be extreme.
class Polytope {
 public:
  struct Facet {
    Vector normal;  // outward, not normalised
    double offset;  // facet plane is normal.x = offset
    std::vector<int> vertices;
  };

  explicit Polytope(std::vector<Vector> vertices);

  static Polytope cube(int n, double half_side = 1.0);
  static Polytope box(const Vector& lo, const Vector& hi);

  int dim() const { return dim_; }
  const std::vector<Vector>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  double support(const Vector& xi) const;
  bool contains(const Vector& x) const;
  Box bounding_box() const;

  Polytope translated(const Vector& v) const;
  Polytope rotated(const Matrix& rotation) const;
  Polytope scaled(double lambda) const;

 private:
  int dim_ = 0;
  std::vector<Vector> vertices_;
  std::vector<Facet> facets_;
  std::vector<std::pair<int, int>> edges_;
};

/// Convex side of an unbounded quadric surface with axis e_n:
///   paraboloid:  x_n >= sum_j x_j^2 / a_j^2
///   hyperboloid: x_n >= c * sqrt(1 + sum_j x_j^2 / a_j^2)   (upper sheet)
class QuadricDomain {
 public:
  enum class Kind { Paraboloid, Hyperboloid };

  static QuadricDomain paraboloid(const Vector& axes);
  static QuadricDomain hyperboloid(const Vector& axes, double c);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(axes_.size()) + 1; }
  const Vector& axes() const { return axes_; }
  double c() const { return c_; }

  SupportValue support(const Vector& xi) const;
  bool contains(const Vector& x) const;

  /// Defining inequality written as x^T Q x + b.x + gamma <= 0. For the hyperboloid
  /// this describes both sheets; the sheet is selected by x_n > 0.
  Matrix quadratic_part() const;
  Vector linear_part() const;
  double constant_part() const;

 private:
  QuadricDomain(Kind kind, Vector axes, double c);
  Kind kind_;
  Vector axes_;
  double c_ = 0.0;
};

using Body = std::variant<Ellipsoid, Polytope, QuadricDomain>;

int dimension(const Body& body);
bool is_bounded(const Body& body);

/// h_K on arbitrary (not necessarily unit) vectors; positively homogeneous.
SupportValue support(const Body& body, const Vector& xi);
SupportValue support(const Body& body, const Direction& xi);

/// Throws InfiniteSupport when either end is unbounded.
ChordInterval chord_interval(const Body& body, const Direction& xi);

/// Throws DimensionMismatch when x.size() != n.
bool contains(const Body& body, const Vector& x);

/// Throws InfiniteSupport for unbounded bodies.
Box bounding_box(const Body& body);

/// Columns form an orthonormal basis of the hyperplane xi^perp.
Matrix orthonormal_complement(const Direction& xi);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace tomoslice
