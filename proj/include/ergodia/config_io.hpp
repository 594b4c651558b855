#pragma once

#include <string>

#include <json.hpp>

#include "ergodia/channel_model.hpp"

namespace ergodia {

// JSON schema:
//   {"K": 3, "snr": 10.0, "phase_bins": 64, "seed": 7,
//    "cross_dist": {"kind": "constant"|"uniform"|"point_mass", "params": {...}}}
// params: constant {"value"}, uniform {"a", "b"}, point_mass {"values", "weights"}.
nlohmann::json to_json(const CrossDistribution& dist);
CrossDistribution cross_distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const NetworkConfig& config);
// Throws ConfigError on missing fields or invalid values.
NetworkConfig network_config_from_json(const nlohmann::json& j);

// Compact command-line form: "constant:10", "uniform:0,20", "point_mass:1@0.5,10@0.5".
CrossDistribution parse_cross_distribution(const std::string& text);

}  // namespace ergodia
