#pragma once

#include <json.hpp>

#include "aniso/exponents.hpp"
#include "aniso/solver.hpp"
#include "aniso/stability.hpp"
#include "aniso/truncations.hpp"

namespace aniso {

/// Flat JSON documents; keys follow the struct field names. Intervals become
/// [lower, upper] and non-finite numbers become null.
nlohmann::json to_json(const ThresholdReport& r);
nlohmann::json to_json(const IntegrabilityThresholds& t);
nlohmann::json to_json(const TruncationReport& r);
nlohmann::json to_json(const LadderReport& r);
nlohmann::json to_json(const StabilityReport& r);
nlohmann::json to_json(const CaccioppoliReport& r);
nlohmann::json to_json(const SweepReport& r);
nlohmann::json to_json(const NonexistenceCertificate& c);

/// Columns R,lhs,rhs,ratio.
std::string sweep_csv(const SweepReport& r);

}  // namespace aniso
