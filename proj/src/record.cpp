#include "magkit/record.hpp"

#include <chrono>
#include <ctime>

namespace magkit {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunRecord::to_json() const {
  return {{"schema_version", 1},
          {"command", command},
          {"input_digest", input_digest},
          {"config", config},
          {"method", method},
          {"magnitude", magnitude},
          {"pmag", pmag},
          {"iterations", iterations},
          {"residual", residual},
          {"wall_time_seconds", wall_time},
          {"timestamp", timestamp}};
}

RunRecord RunRecord::from_estimate(const std::string& command, const std::string& digest,
                                   nlohmann::json config, const MagnitudeEstimate& est) {
  RunRecord r;
  r.command = command;
  r.input_digest = digest;
  r.config = std::move(config);
  r.method = method_name(est.method);
  r.magnitude = est.value;
  r.pmag = est.pmag;
  r.iterations = est.iterations;
  r.residual = est.residual_norm;
  r.wall_time = est.wall_time;
  r.timestamp = utc_timestamp();
  if (est.jittered) r.config["jittered"] = true;
  if (est.degenerate) r.config["degenerate"] = true;
  if (!est.converged) r.config["converged"] = false;
  return r;
}

}  // namespace magkit
