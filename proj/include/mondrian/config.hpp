#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mondrian/cluster.hpp"
#include "mondrian/error.hpp"
#include "mondrian/grid.hpp"
#include "mondrian/layout.hpp"
#include "mondrian/templates.hpp"

namespace mondrian {

/// Tunables shared by the CLI and the service. Defaults are the values the
/// method was tuned with.
struct Config {
  ClusterParams cluster;
  Thresholds thresholds;
  FloodParams flood;
  CsvDialect dialect;
};

inline nlohmann::json to_json(const Config& c) {
  return {
      {"alpha", c.cluster.alpha},
      {"beta", c.cluster.beta},
      {"gamma", c.cluster.gamma},
      {"radius", c.cluster.epsilon},
      {"tau_r", c.thresholds.tau_r},
      {"tau_f", c.thresholds.tau_f},
      {"flood_threshold", c.flood.stop_threshold},
      {"flood_max_iterations", c.flood.max_iterations},
      {"delimiter", std::string(1, c.dialect.delimiter)},
      {"quote", std::string(1, c.dialect.quote)},
  };
}

/// Overrides the fields present in a JSON object; unknown keys are rejected.
inline void apply_json(Config& c, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  auto single_char = [](const nlohmann::json& v, const char* key) {
    auto s = v.get<std::string>();
    if (s.size() != 1) {
      throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be one character");
    }
    return s[0];
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "alpha") c.cluster.alpha = value.get<double>();
      else if (key == "beta") c.cluster.beta = value.get<double>();
      else if (key == "gamma") c.cluster.gamma = value.get<double>();
      else if (key == "radius") c.cluster.epsilon = value.get<double>();
      else if (key == "tau_r") c.thresholds.tau_r = value.get<double>();
      else if (key == "tau_f") c.thresholds.tau_f = value.get<double>();
      else if (key == "flood_threshold") c.flood.stop_threshold = value.get<double>();
      else if (key == "flood_max_iterations") c.flood.max_iterations = value.get<int>();
      else if (key == "delimiter") c.dialect.delimiter = single_char(value, "delimiter");
      else if (key == "quote") c.dialect.quote = single_char(value, "quote");
      else throw Error(ErrorCode::InvalidArgument, "unknown config key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad config value: ") + e.what());
  }
  c.cluster.validate();
}

inline Config load_config(const std::filesystem::path& path) {
  Config c;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
  apply_json(c, j);
  return c;
}

}  // namespace mondrian
