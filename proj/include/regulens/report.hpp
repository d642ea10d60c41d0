#pragma once

// Serialization of decomposition reports. JSON is the machine-checkable
// contract (field order fixed, rationals as "a/b" strings); the text form is a
// short human summary of the same data.

#include "regulens/instances.hpp"

#include <json.hpp>

#include <string>

namespace regulens {

using Json = nlohmann::ordered_json;

/// Sorted atom list for power-set coordinates, [lo, hi) for interval ones.
Json cell_json(const SemiRing& s, const Cell& c);

Json bound_json(const BoundValue& b);

Json witness_json(const SemiRing& s, const Witness& w);

/// Top-level keys, in order: config, instance_summary, partition, per_set,
/// trace, bounds, theorem.
Json report_json(const DriverReport& rep, const Json& instance_summary);

std::string report_text(const DriverReport& rep, const Json& instance_summary);

}  // namespace regulens
