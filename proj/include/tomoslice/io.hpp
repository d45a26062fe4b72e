#pragma once

// JSON and CSV serialisation of bodies and reports. Numbers are written in the
// shortest round-trip decimal form with '.' as separator, independent of locale.

#include <json.hpp>

#include <string>

#include "tomoslice/algfit.hpp"
#include "tomoslice/bodies.hpp"
#include "tomoslice/detect.hpp"
#include "tomoslice/radon.hpp"
#include "tomoslice/sections.hpp"

namespace tomoslice {

/// Malformed body or configuration document; the message names the offending key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Accepts {"type":"ellipsoid","center":[..],"shape":[[..],..]} |
/// {"type":"polytope","vertices":[[..],..]} | {"type":"paraboloid","axes":[..]} |
/// {"type":"hyperboloid","axes":[..],"c":..}. Unknown keys are rejected.
Body body_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Body& body);

nlohmann::json to_json(const Direction& xi);
nlohmann::json to_json(const SectionProfile& profile);
nlohmann::json to_json(const MomentReport& report);
nlohmann::json to_json(const CenteredMomentReport& report);
nlohmann::json to_json(const RootReport& report);
nlohmann::json to_json(const AlgebraicFitReport& report);
nlohmann::json to_json(const AsymptoticReport& report);
nlohmann::json to_json(const EllipsoidReport& report);
nlohmann::json to_json(const ConsistencyReport& report);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// Columns t,A.
std::string to_csv(const SectionProfile& profile);
/// Columns xi_1..xi_n,M_k.
std::string to_csv(const MomentReport& report);

}  // namespace tomoslice
