#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ergodia {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidSpec = 2;
inline constexpr int kExitRuntimeError = 3;

// One batch experiment. `params` holds the command's arguments, keyed by the
// long flag names without dashes (K, snr, bins, uses, links, eps, ...).
struct ExperimentSpec {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::string> output;  // stdout when empty
  std::string format = "csv";
  std::optional<std::uint64_t> seed;  // falls back to ERGODIA_SEED
  // scaling only: where to write the per-(K, trial) rows.
  std::optional<std::string> trials_output;
  unsigned workers = 1;
};

const std::vector<std::string>& known_commands();

// {"command", "params", "output", "format", "seed", "trials_output", "workers"}.
// A NetworkConfig document ({K, snr, cross_dist, phase_bins, seed}) is also
// accepted in place of params. Throws ConfigError on a malformed document.
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);

// Folds a NetworkConfig-shaped or params-shaped JSON object into spec.params
// (existing keys win).
void merge_config_params(ExperimentSpec& spec, const nlohmann::json& config);

// Schema and range checks; empty means valid.
std::vector<std::string> validate(const ExperimentSpec& spec);

struct RenderedOutput {
  std::string payload;
  std::string trials_payload;  // scaling per-trial table, if requested
  std::vector<std::string> warnings;
};

// Runs the experiment and renders its output; `wall_time` controls whether the
// wall-clock field is emitted. Throws on invalid specs or module errors.
RenderedOutput render(const ExperimentSpec& spec, bool wall_time = true);

// Validates, runs, and writes the result. Diagnostics go to `err`; a payload
// without an output path goes to `out`. No output file is left behind on failure.
int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace ergodia
