#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "complexkit/hamiltonian.hpp"

namespace complexkit {

// Thrown when a configuration document cannot be parsed or validated;
// carries a line/column position when one is known.
struct ConfigParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::pair<int, int> line_column(const std::string& text,
                                       std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline ScalarTimeFunction scalar_function_from_json(const nlohmann::json& j,
                                                    const std::string& what) {
  if (j.is_number()) return ScalarTimeFunction::constant(j.get<double>());
  if (!j.is_object() || !j.contains("preset"))
    throw ConfigParseError(what + ": expected a number or {preset, c0, ...}");
  const std::string preset = j.at("preset").get<std::string>();
  const double c0 = j.value("c0", 0.0);
  const double c1 = j.value("c1", 0.0);
  const double c2 = j.value("c2", 0.0);
  if (preset == "constant") return ScalarTimeFunction::constant(c0);
  if (preset == "linear") return ScalarTimeFunction::linear(c0, c1);
  if (preset == "quadratic") return ScalarTimeFunction::quadratic(c0, c1, c2);
  throw ConfigParseError(what + ": unknown preset '" + preset + "'");
}

inline Eigen::Vector3d vector3_from_json(const nlohmann::json& j,
                                         const std::string& what) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigParseError(what + ": expected a 3-element array");
  return Eigen::Vector3d(j.at(0).get<double>(), j.at(1).get<double>(),
                         j.at(2).get<double>());
}

}  // namespace detail

inline FieldConfiguration field_configuration_from_json(
    const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigParseError("config: missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    return FieldConfiguration::constant(
        j.value("h0", 0.0), detail::vector3_from_json(j.at("hvec"), "hvec"));
  }
  if (kind == "scaled_direction") {
    Eigen::Vector3d dir =
        detail::vector3_from_json(j.at("direction"), "direction");
    if (dir.norm() == 0.0)
      throw ConfigParseError("scaled_direction: zero direction");
    ScalarTimeFunction h0 = ScalarTimeFunction::constant(0.0);
    if (j.contains("h0")) h0 = detail::scalar_function_from_json(j.at("h0"), "h0");
    return FieldConfiguration::scaled_direction(
        detail::scalar_function_from_json(j.at("amplitude"), "amplitude"),
        dir.normalized(), h0);
  }
  if (kind == "rotating_xy") {
    return FieldConfiguration::rotating_xy(j.at("omega").get<double>(),
                                           j.at("nu").get<double>());
  }
  if (kind == "parametric") {
    return FieldConfiguration::parametric(
        detail::scalar_function_from_json(j.at("alpha"), "alpha"),
        detail::scalar_function_from_json(j.at("beta"), "beta"));
  }
  throw ConfigParseError("config: unknown kind '" + kind + "'");
}

inline FieldConfiguration field_configuration_from_text(
    const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = detail::line_column(text, e.byte);
    throw ConfigParseError("config parse error at line " +
                           std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + e.what());
  }
  try {
    return field_configuration_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigParseError(std::string("config: ") + e.what());
  }
}

}  // namespace complexkit
