#include "gcdlab/report.hpp"

#include <string>

namespace gcdlab::analyzer {

using nlohmann::json;

namespace {

json optional_value(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

// JSON object keys must be strings.
template <class V>
json keyed(const std::map<std::uint64_t, V>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

json verdicts(const std::map<std::string, Verdict>& m) {
  json j = json::object();
  for (const auto& [rule, v] : m) j[rule] = std::string(to_string(v));
  return j;
}

}  // namespace

void to_json(json& j, const Violation& v) {
  j = json{{"rule", v.rule},
           {"k", v.k},
           {"expected", optional_value(v.expected)},
           {"observed", optional_value(v.observed)},
           {"detail", v.detail}};
}

void to_json(json& j, const RuleReport& r) {
  j = json{{"base", r.base},
           {"family", r.family},
           {"inferred", r.inferred},
           {"correct_gcd_count", r.inferred.size()},
           {"missing", r.missing},
           {"insufficient_data", r.insufficient},
           {"top_frequency", keyed(r.top_frequency)},
           {"verdicts", verdicts(r.verdicts)},
           {"violations", r.violations},
           {"malformed", r.malformed},
           {"passed", r.passed()}};
}

void to_json(json& j, const EpochUniformResult& r) {
  json classes = json::object();
  for (const auto& [label, pred] : r.class_prediction) {
    classes[std::to_string(label)] = optional_value(pred);
  }
  j = json{{"epoch", r.epoch},
           {"status", r.status},
           {"verdicts", verdicts(r.verdicts)},
           {"class_prediction", classes},
           {"correct", r.correct},
           {"violations", r.violations}};
}

void to_json(json& j, const UniformReport& r) {
  json drift = json::object();
  for (const auto& [label, series] : r.drift) {
    json s = json::array();
    for (const auto& [epoch, pred] : series) s.push_back({epoch, optional_value(pred)});
    drift[std::to_string(label)] = s;
  }
  json churn = json::array();
  for (const auto& [epoch, c] : r.churn) churn.push_back({{"epoch", epoch}, {"churn", c}});
  j = json{{"epochs", r.epochs}, {"drift", drift}, {"churn", churn}, {"breakdown", r.breakdown}};
}

void to_json(json& j, const Metrics& m) {
  j = json{{"records", m.records},
           {"accuracy", m.accuracy},
           {"correct_gcd_count", m.correct_gcd_count},
           {"per_k_accuracy", keyed(m.per_k_accuracy)}};
}

}  // namespace gcdlab::analyzer
