// ergodia: batch experiments on ergodic interference networks.
//
//   ergodia simulate-alignment --K 3 --snr 10 --bins 64 --uses 200000 --seed 7
//   ergodia count-minimal --K 10
//   ergodia classify-bottleneck --K 3 --links 1:2,2:3
//   ergodia --config experiment.json

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergodia/cli_harness.hpp"
#include "ergodia/error.hpp"

namespace {

using nlohmann::json;

// Flag values are kept as text and typed by JSON parsing, so that "3" becomes
// an integer, "10.5" a number and "1:2,2:3" stays a string. Range and type
// checks happen in ergodia::validate.
json typed(const std::string& raw) {
  try {
    json v = json::parse(raw);
    if (v.is_number() || v.is_boolean()) return v;
  } catch (const json::exception&) {
  }
  return raw;
}

struct Subcommand {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ergodic interference alignment and bottleneck-state toolkit"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string output;
  std::string trials_output;
  std::string format = "csv";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  auto* config_opt = app.add_option("--config", config_path, "JSON experiment spec or network config");
  auto* output_opt = app.add_option("-o,--output", output, "Output file (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (fallback: ERGODIA_SEED)");
  auto* workers_opt = app.add_option("--workers", workers, "Worker threads for independent trials");
  auto* trials_output_opt = app.add_option("--trials-output", trials_output, "scaling: per-trial CSV/JSON file");
  for (auto* opt : {config_opt, output_opt, seed_opt, workers_opt, trials_output_opt}) opt->configurable(false);

  const std::map<std::string, std::string> kDescriptions{
      {"simulate-alignment", "Monte Carlo ergodic alignment via complementary state pairing"},
      {"classify-bottleneck", "Classify a directed bottleneck link set"},
      {"count-minimal", "Count (and optionally enumerate) minimal bottleneck states"},
      {"bounds", "Capacity bounds for a bottleneck edge set"},
      {"scaling", "Dense-network outer/inner bound gap sweep over K"},
      {"separability-demo", "Compare separate and joint coding over parallel channel states"},
      {"inseparability-demo", "Three-user example comparing separate and joint coding"},
  };
  const std::map<std::string, std::vector<std::pair<std::string, std::string>>> commands{
      {"simulate-alignment",
       {{"K", "users"},
        {"snr", "direct-link SNR (linear)"},
        {"bins", "phase bins B (even)"},
        {"uses", "channel uses N per trial"},
        {"cross", "cross INR law: constant:x | uniform:a,b | point_mass:v@w,..."},
        {"trials", "independent trials (default 1)"},
        {"mode", "quantized | exact"}}},
      {"classify-bottleneck", {{"K", "users"}, {"links", "directed bottleneck links r:t,..."}}},
      {"count-minimal", {{"K", "users"}, {"enumerate", "also enumerate by brute force (K <= 8)"}}},
      {"bounds",
       {{"K", "users"}, {"snr", "direct-link SNR"}, {"eps", "pair-bound relaxation"}, {"links", "bottleneck links r:t,..."}}},
      {"scaling",
       {{"Ks", "comma-separated user counts"},
        {"cross", "cross INR law"},
        {"snr", "direct-link SNR"},
        {"eps", "eps-bottleneck tolerance"},
        {"trials", "networks per K"}}},
      {"separability-demo", {{"snr", "direct-link SNR"}, {"alpha", "strong cross-link INR"}}},
      {"inseparability-demo", {{"snr", "direct-link SNR"}}},
  };

  std::map<std::string, Subcommand> subs;
  for (const auto& [name, flags] : commands) {
    Subcommand& sub = subs[name];
    sub.app = app.add_subcommand(name, kDescriptions.at(name));
    sub.app->fallthrough();
    for (const auto& [flag, help] : flags) sub.app->add_option("--" + flag, sub.values[flag], help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ergodia::kExitInvalidSpec;
  }

  ergodia::ExperimentSpec spec;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot read config " << config_path << "\n";
        return ergodia::kExitInvalidSpec;
      }
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
        return ergodia::kExitInvalidSpec;
      }
      spec = ergodia::experiment_spec_from_json(doc);
    }
  } catch (const ergodia::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ergodia::kExitInvalidSpec;
  }

  for (auto& [name, sub] : subs) {
    if (!sub.app->parsed()) continue;
    spec.command = name;
    json flags = json::object();
    for (const auto& [flag, raw] : sub.values)
      if (sub.app->get_option("--" + flag)->count() > 0) flags[flag] = typed(raw);
    // Explicit flags override the config file.
    for (const auto& [k, v] : flags.items()) spec.params[k] = v;
  }
  if (spec.command.empty()) {
    std::cerr << app.help();
    return ergodia::kExitInvalidSpec;
  }
  if (output_opt->count()) spec.output = output;
  if (trials_output_opt->count()) spec.trials_output = trials_output;
  if (seed_opt->count()) spec.seed = seed;
  if (workers_opt->count()) spec.workers = workers;
  if (app.get_option("--format")->count()) spec.format = format;

  return ergodia::run(spec, std::cout, std::cerr);
}
