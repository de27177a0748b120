#pragma once

#include <string>

#include "magkit/magnitude.hpp"

#include <json.hpp>

namespace magkit {

/// One CLI run, serialized to stdout as versioned JSON. Identical input
/// digest, config and seed reproduce the magnitude.
struct RunRecord {
  std::string command;
  std::string input_digest;
  nlohmann::json config = nlohmann::json::object();
  std::string method;
  double magnitude = 0.0;
  double pmag = 0.0;
  long iterations = 0;
  double residual = 0.0;
  double wall_time = 0.0;
  std::string timestamp;

  nlohmann::json to_json() const;
  static RunRecord from_estimate(const std::string& command, const std::string& digest,
                                 nlohmann::json config, const MagnitudeEstimate& est);
};

/// Current UTC time as ISO-8601 (e.g. 2026-08-09T12:00:00Z).
std::string utc_timestamp();

}  // namespace magkit
