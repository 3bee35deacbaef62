#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "jetham/parallel.hpp"
#include "jetham/scenario.hpp"
#include "jetham/tensors.hpp"

namespace jetham {

/// Builds the machine-readable document for one `compute` request. Families
/// appear in table order, entries dense with 1-based index tuples
/// (paired axes expanded to their two indices), so output bytes depend only
/// on scenario + seed.
nlohmann::json compute_document(const Scenario& s, const CompiledScenario& cs,
                                const std::string& what, ExecMode mode);

/// Canonical rendering: 2-space indent, sorted keys, shortest round-trip
/// number formatting, trailing newline.
std::string render_document(const nlohmann::json& doc);

nlohmann::json tensor_to_json(const DTensor& t);

}  // namespace jetham
