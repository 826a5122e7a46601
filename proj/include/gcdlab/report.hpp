#pragma once

// JSON views of analyzer results.

#include <json.hpp>

#include "gcdlab/analyzer.hpp"

namespace gcdlab::analyzer {

void to_json(nlohmann::json& j, const Violation& v);
void to_json(nlohmann::json& j, const RuleReport& r);
void to_json(nlohmann::json& j, const EpochUniformResult& r);
void to_json(nlohmann::json& j, const UniformReport& r);
void to_json(nlohmann::json& j, const Metrics& m);

}  // namespace gcdlab::analyzer
