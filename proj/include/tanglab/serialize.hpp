#pragma once

#include <string>

#include "json.hpp"
#include "tanglab/kacrice.hpp"
#include "tanglab/pipeline.hpp"

namespace tanglab {

// Provenance stamped into every output document.
struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string tool_version;
};

nlohmann::json to_json(const FieldRealization& f);
FieldRealization realization_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DirectionDistribution& d);
nlohmann::json to_json(const EstimateTable& t);
nlohmann::json to_json(const TangencyRecord& r);
nlohmann::json to_json(const StabilityReport& r);
nlohmann::json to_json(const SandwichReport& r);
nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const ErgodicReport& r);
nlohmann::json to_json(const KacRiceEstimate& e);
nlohmann::json to_json(const CovMcReport& r);

// One JSONL line per component: flags, vertex count, area, diameter, counts;
// vertices only when emit_vertices is set.
nlohmann::json component_line(const ComponentAnalysis& ca, bool emit_vertices);

void stamp(nlohmann::json& j, const Provenance& prov);
void write_json_file(const std::string& path, const nlohmann::json& j);

std::string tool_version();

}  // namespace tanglab
