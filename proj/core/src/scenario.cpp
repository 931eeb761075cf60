#include <json.hpp>

#include "sdmp/engine.hpp"
#include "sdmp/error.hpp"

namespace sdmp::engine {

namespace {

std::uint32_t read_count(const nlohmann::json& mac, const char* key, std::uint32_t fallback) {
  const auto it = mac.find(key);
  if (it == mac.end()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw Error(ErrorCode::ParseError, std::string("$.mac.") + key + ": expected non-negative integer");
  }
  return it->get<std::uint32_t>();
}

}  // namespace

Scenario load_scenario(std::string_view json_text) {
  Scenario scenario{topo::load_topology(json_text), {}};
  // load_topology already rejected malformed JSON.
  const auto doc = nlohmann::json::parse(json_text);
  if (const auto it = doc.find("mac"); it != doc.end()) {
    if (!it->is_object()) throw Error(ErrorCode::ParseError, "$.mac: expected object");
    auto& policy = scenario.policy;
    policy.cw_min = read_count(*it, "cw_min", policy.cw_min);
    policy.cw_max = read_count(*it, "cw_max", policy.cw_max);
    policy.max_retries = read_count(*it, "max_retries", policy.max_retries);
    policy.check();
  }
  return scenario;
}

}  // namespace sdmp::engine
