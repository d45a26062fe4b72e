#include "tomoslice/io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace tomoslice {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : doc.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

const json& require_key(const json& doc, const std::string& key, const std::string& where) {
  if (!doc.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  return doc.at(key);
}

double read_number(const json& value, const std::string& key) {
  if (!value.is_number()) throw ConfigError("key '" + key + "' must be a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ConfigError("key '" + key + "' must be finite");
  return v;
}

Vector read_vector(const json& value, const std::string& key) {
  if (!value.is_array() || value.empty())
    throw ConfigError("key '" + key + "' must be a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(value.size()));
  for (size_t i = 0; i < value.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = read_number(value[i], key);
  return v;
}

Matrix read_matrix(const json& value, const std::string& key) {
  if (!value.is_array() || value.empty()) throw ConfigError("key '" + key + "' must be a matrix");
  const auto rows = static_cast<Eigen::Index>(value.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = read_vector(value[static_cast<size_t>(r)], key);
    if (row.size() != rows) throw ConfigError("key '" + key + "' must be a square matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

// nlohmann writes non-finite numbers as null; keep that explicit.
json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Body body_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("body must be a JSON object");
  const json& type = require_key(doc, "type", "body");
  if (!type.is_string()) throw ConfigError("key 'type' must be a string");
  const std::string kind = type.get<std::string>();
  try {
    if (kind == "ellipsoid") {
      reject_unknown_keys(doc, {"type", "center", "shape"}, "ellipsoid body");
      Vector center = read_vector(require_key(doc, "center", "ellipsoid body"), "center");
      Matrix shape = read_matrix(require_key(doc, "shape", "ellipsoid body"), "shape");
      if (shape.rows() != center.size())
        throw ConfigError("key 'shape' does not match the dimension of 'center'");
      return Ellipsoid(std::move(center), std::move(shape));
    }
    if (kind == "polytope") {
      reject_unknown_keys(doc, {"type", "vertices"}, "polytope body");
      const json& verts = require_key(doc, "vertices", "polytope body");
      if (!verts.is_array() || verts.empty()) throw ConfigError("key 'vertices' must be an array");
      std::vector<Vector> points;
      for (const auto& v : verts) points.push_back(read_vector(v, "vertices"));
      for (const auto& p : points)
        if (p.size() != points.front().size())
          throw ConfigError("key 'vertices' mixes dimensions");
      return Polytope(std::move(points));
    }
    if (kind == "paraboloid") {
      reject_unknown_keys(doc, {"type", "axes"}, "paraboloid body");
      return QuadricDomain::paraboloid(read_vector(require_key(doc, "axes", "paraboloid body"), "axes"));
    }
    if (kind == "hyperboloid") {
      reject_unknown_keys(doc, {"type", "axes", "c"}, "hyperboloid body");
      return QuadricDomain::hyperboloid(
          read_vector(require_key(doc, "axes", "hyperboloid body"), "axes"),
          read_number(require_key(doc, "c", "hyperboloid body"), "c"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid ") + kind + " body: " + e.what());
  }
  throw ConfigError("key 'type' has unknown value '" + kind + "'");
}

json to_json(const Body& body) {
  return std::visit(
      [](const auto& b) -> json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return {{"type", "ellipsoid"}, {"center", vector_json(b.center())}, {"shape", matrix_json(b.shape())}};
        } else if constexpr (std::is_same_v<T, Polytope>) {
          json verts = json::array();
          for (const auto& v : b.vertices()) verts.push_back(vector_json(v));
          return {{"type", "polytope"}, {"vertices", verts}};
        } else if (b.kind() == QuadricDomain::Kind::Paraboloid) {
          return {{"type", "paraboloid"}, {"axes", vector_json(b.axes())}};
        } else {
          return {{"type", "hyperboloid"}, {"axes", vector_json(b.axes())}, {"c", b.c()}};
        }
      },
      body);
}

json to_json(const Direction& xi) { return vector_json(xi.vec()); }

json to_json(const SectionProfile& profile) {
  return {{"xi", to_json(profile.xi)},
          {"n", profile.n},
          {"method", to_string(profile.method)},
          {"grid", profile.grid},
          {"values", profile.values}};
}

json to_json(const MomentReport& report) {
  json dirs = json::array();
  for (const auto& d : report.directions) dirs.push_back(to_json(d));
  return {{"k", report.k},
          {"n", report.n},
          {"quad_order", report.quad_order},
          {"seed", report.seed},
          {"directions", dirs},
          {"moments", report.moments},
          {"monomials", report.monomials},
          {"fit_coefficients", report.fit_coefficients},
          {"relative_residual", number_json(report.relative_residual)},
          {"absolute_residual", number_json(report.absolute_residual)}};
}

json to_json(const CenteredMomentReport& report) {
  json dirs = json::array();
  for (const auto& d : report.directions) dirs.push_back(to_json(d));
  return {{"directions", dirs},
          {"m0", report.m0},
          {"m1", report.m1},
          {"predicted_m1", report.predicted_m1},
          {"max_abs_error", report.max_abs_error},
          {"max_rel_error", report.max_rel_error},
          {"passed", report.passed}};
}

json to_json(const RootReport& report) {
  json out = {{"verdict", to_string(report.verdict)},
              {"multiplicity", report.multiplicity},
              {"h_plus", report.h_plus},
              {"h_minus", report.h_minus}};
  if (report.verdict == RootVerdict::StructurallyInfeasible) return out;
  out["scale"] = number_json(report.scale);
  out["normalized_constant"] = number_json(report.normalized_constant);
  out["mismatch"] = number_json(report.mismatch);
  out["root_plus"] = number_json(report.root_plus);
  out["root_minus"] = number_json(report.root_minus);
  out["root_plus_error"] = number_json(report.root_plus_error);
  out["root_minus_error"] = number_json(report.root_minus_error);
  return out;
}

json to_json(const AlgebraicFitReport& report) {
  json out = {{"xi", to_json(report.xi)},
              {"n", report.n},
              {"m", report.m},
              {"degree", report.degree},
              {"basis", "chebyshev"},
              {"t_range", {report.map.lo, report.map.hi}},
              {"coefficients", report.coefficients},
              {"relative_residual", number_json(report.relative_residual)},
              {"degree_bound_ok", report.degree_bound_ok}};
  out["root_report"] = report.root_report ? to_json(*report.root_report) : json(nullptr);
  return out;
}

json to_json(const AsymptoticReport& report) {
  return {{"xi", to_json(report.xi)},
          {"t0", report.t0},
          {"estimated_exponent", report.estimated_exponent},
          {"estimated_constant", report.estimated_constant},
          {"regression_window", {report.delta_min, report.delta_max}},
          {"length_scale", report.length_scale},
          {"depths", report.depths},
          {"values", report.values}};
}

json to_json(const EllipsoidReport& report) {
  return {{"verdict", report.accepted ? "accept" : "reject"},
          {"e", vector_json(report.e)},
          {"S", matrix_json(report.s)},
          {"S_eigenvalues", report.s_eigenvalues},
          {"linear_residual", number_json(report.linear_residual)},
          {"quadratic_residual", number_json(report.quadratic_residual)},
          {"support_mismatch", number_json(report.support_mismatch)},
          {"recovered_center", vector_json(report.recovered_center)},
          {"recovered_shape", report.recovered_shape ? matrix_json(*report.recovered_shape) : json(nullptr)},
          {"tol_linear", report.tol_linear},
          {"tol_quadratic", report.tol_quadratic},
          {"num_directions", report.num_directions},
          {"seed", report.seed}};
}

json to_json(const ConsistencyReport& report) {
  return {{"max_error", number_json(report.max_error)},
          {"constant_spread", number_json(report.constant_spread)},
          {"constant_direction_independent", report.constant_direction_independent},
          {"num_probes", report.num_probes}};
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string to_csv(const SectionProfile& profile) {
  std::string out = "t,A\n";
  for (size_t i = 0; i < profile.grid.size(); ++i)
    out += format_double(profile.grid[i]) + "," + format_double(profile.values[i]) + "\n";
  return out;
}

std::string to_csv(const MomentReport& report) {
  std::string out;
  for (int j = 0; j < report.n; ++j) out += "xi_" + std::to_string(j + 1) + ",";
  out += "M_" + std::to_string(report.k) + "\n";
  for (size_t i = 0; i < report.directions.size(); ++i) {
    for (int j = 0; j < report.n; ++j) out += format_double(report.directions[i][j]) + ",";
    out += format_double(report.moments[i]) + "\n";
  }
  return out;
}

}  // namespace tomoslice
