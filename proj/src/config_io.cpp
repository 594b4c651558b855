#include "ergodia/config_io.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "ergodia/error.hpp"

namespace ergodia {

using nlohmann::json;

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

json to_json(const CrossDistribution& dist) {
  json params;
  switch (dist.kind()) {
    case CrossDistribution::Kind::Constant:
      params = {{"value", dist.values()[0]}};
      break;
    case CrossDistribution::Kind::Uniform:
      params = {{"a", dist.values()[0]}, {"b", dist.values()[1]}};
      break;
    case CrossDistribution::Kind::PointMass:
      params = {{"values", dist.values()}, {"weights", dist.weights()}};
      break;
  }
  return {{"kind", to_string(dist.kind())}, {"params", params}};
}

CrossDistribution cross_distribution_from_json(const json& j) {
  const auto kind = required<std::string>(j, "kind");
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (kind == "constant") return CrossDistribution::constant(required<double>(params, "value"));
  if (kind == "uniform")
    return CrossDistribution::uniform(required<double>(params, "a"), required<double>(params, "b"));
  if (kind == "point_mass")
    return CrossDistribution::point_mass(required<std::vector<double>>(params, "values"),
                                         required<std::vector<double>>(params, "weights"));
  throw ConfigError("unknown cross_dist kind '" + kind + "'");
}

json to_json(const NetworkConfig& config) {
  return {{"K", config.users},
          {"snr", config.snr},
          {"cross_dist", to_json(config.cross)},
          {"phase_bins", config.phase_bins},
          {"seed", config.seed}};
}

NetworkConfig network_config_from_json(const json& j) {
  NetworkConfig config;
  config.users = required<int>(j, "K");
  config.snr = required<double>(j, "snr");
  config.cross = cross_distribution_from_json(required<json>(j, "cross_dist"));
  config.phase_bins = required<int>(j, "phase_bins");
  config.seed = required<std::uint64_t>(j, "seed");
  config.validate();
  return config;
}

CrossDistribution parse_cross_distribution(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("cross distribution must look like kind:params");
  const std::string kind = text.substr(0, colon);
  const auto args = split(text.substr(colon + 1), ',');
  if (kind == "constant") {
    if (args.size() != 1) throw ConfigError("constant takes one value");
    return CrossDistribution::constant(parse_double(args[0]));
  }
  if (kind == "uniform") {
    if (args.size() != 2) throw ConfigError("uniform takes two bounds a,b");
    return CrossDistribution::uniform(parse_double(args[0]), parse_double(args[1]));
  }
  if (kind == "point_mass" || kind == "pointmass") {
    std::vector<double> values;
    std::vector<double> weights;
    for (const auto& atom : args) {
      const auto at = atom.find('@');
      if (at == std::string::npos) throw ConfigError("point-mass atoms must look like value@weight");
      values.push_back(parse_double(atom.substr(0, at)));
      weights.push_back(parse_double(atom.substr(at + 1)));
    }
    return CrossDistribution::point_mass(std::move(values), std::move(weights));
  }
  throw ConfigError("unknown cross distribution kind '" + kind + "'");
}

}  // namespace ergodia
