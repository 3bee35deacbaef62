#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jetham/connections.hpp"
#include "jetham/transform.hpp"

namespace jetham {

/// A scenario file: dimensions, metric/coefficient expressions, evaluation
/// points and a seed for the randomized suites. Expression strings only; no
/// embedded code.
struct Scenario {
  enum class Mode { CanonicalBerwald, Custom };

  Dims dims;
  std::vector<std::string> temporal_metric;  // m*m row-major
  std::vector<std::string> spatial_metric;   // n*n row-major
  std::optional<std::string> hamiltonian;
  Mode mode = Mode::CanonicalBerwald;
  // optional custom linear connection for canonical-berwald mode ([a][b][c], [i][j][k])
  std::optional<std::vector<std::string>> chi;
  std::optional<std::vector<std::string>> gamma;
  // custom mode inputs
  std::optional<std::vector<std::string>> n1;  // [a][i][b]
  std::optional<std::vector<std::string>> n2;  // [a][i][j]
  // nine coefficient families, each optional (missing = zero), layouts as in
  // NLinearConnection
  std::optional<std::vector<std::string>> a_tt, a_ss, a_pp, h_tt, h_ss, h_pp, c_tt, c_ss, c_pp;
  std::vector<Point> eval_points;
  std::uint64_t seed = 0;
  // Deliberate corruption applied to the old side of every covariance check;
  // the verification suite must then fail. Exposes the mutation-guard path.
  double mutation = 0.0;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

/// Everything derived from a scenario in one coordinate system, ready for the
/// table/verification engines.
struct CompiledScenario {
  Dims dims;
  Scenario::Mode mode = Scenario::Mode::CanonicalBerwald;
  TemporalMetric h;
  SpatialMetric phi;
  std::optional<Field> hamiltonian;
  LinearConnectionCoeffs linear;  // canonical-berwald mode
  NLinearConnection conn;
  std::vector<Point> points;
  std::uint64_t seed = 0;
  double mutation = 0.0;
};

/// Parses and validates: dimension consistency, metric symmetry and
/// invertibility at the evaluation points, block dependence.
CompiledScenario compile_scenario(const Scenario& s);

/// The same geometry re-expressed in the new coordinates: metrics pulled back
/// with their Jacobian factors, canonical/Berwald data re-derived from the
/// transformed inputs, custom coefficients transformed by the rules.
CompiledScenario transform_scenario(const CompiledScenario& cs, const CoordinateChange& chg);

}  // namespace jetham
