#include "ergodia/cli_harness.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "ergodia/alignment_sim.hpp"
#include "ergodia/bottleneck_graph.hpp"
#include "ergodia/capacity_bounds.hpp"
#include "ergodia/config_io.hpp"
#include "ergodia/dense_scaling.hpp"
#include "ergodia/error.hpp"
#include "ergodia/format.hpp"

namespace ergodia {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_params() {
  static const std::map<std::string, std::set<std::string>> table{
      {"simulate-alignment", {"K", "snr", "bins", "uses", "cross", "trials", "mode"}},
      {"classify-bottleneck", {"K", "links"}},
      {"count-minimal", {"K", "enumerate"}},
      {"bounds", {"K", "snr", "eps", "links"}},
      {"scaling", {"Ks", "cross", "snr", "eps", "trials"}},
      {"separability-demo", {"snr", "alpha"}},
      {"inseparability-demo", {"snr"}},
  };
  return table;
}

bool needs_seed(const std::string& command) { return command == "simulate-alignment" || command == "scaling"; }

class Params {
 public:
  Params(const json& params, std::vector<std::string>& diagnostics) : p_(params), diag_(diagnostics) {}

  std::optional<long long> integer(const std::string& key, bool required) {
    if (!present(key, required)) return std::nullopt;
    const json& v = p_.at(key);
    if (!v.is_number_integer()) return fail<long long>(key + " must be an integer");
    return v.get<long long>();
  }

  std::optional<double> number(const std::string& key, bool required) {
    if (!present(key, required)) return std::nullopt;
    const json& v = p_.at(key);
    if (!v.is_number()) return fail<double>(key + " must be a number");
    return v.get<double>();
  }

  std::optional<std::string> text(const std::string& key, bool required) {
    if (!present(key, required)) return std::nullopt;
    const json& v = p_.at(key);
    if (!v.is_string()) return fail<std::string>(key + " must be a string");
    return v.get<std::string>();
  }

  std::optional<bool> boolean(const std::string& key) {
    if (!present(key, false)) return std::nullopt;
    const json& v = p_.at(key);
    if (!v.is_boolean()) return fail<bool>(key + " must be true or false");
    return v.get<bool>();
  }

  std::optional<CrossDistribution> cross(const std::string& key) {
    if (!present(key, false)) return std::nullopt;
    const json& v = p_.at(key);
    try {
      if (v.is_string()) return parse_cross_distribution(v.get<std::string>());
      if (v.is_object()) return cross_distribution_from_json(v);
    } catch (const ConfigError& e) {
      return fail<CrossDistribution>(key + ": " + e.what());
    }
    return fail<CrossDistribution>(key + " must be a string such as constant:10 or a cross_dist object");
  }

  std::optional<std::set<Link>> links(const std::string& key) {
    if (!present(key, false)) return std::set<Link>{};
    const json& v = p_.at(key);
    try {
      if (v.is_string()) return parse_links(v.get<std::string>());
      if (v.is_array()) return bottleneck_graph_from_json({{"K", 1000000}, {"links", v}}).links();
    } catch (const ConfigError& e) {
      return fail<std::set<Link>>(key + ": " + e.what());
    }
    return fail<std::set<Link>>(key + " must be r:t pairs or an array of [r, t]");
  }

  std::optional<std::vector<int>> int_list(const std::string& key) {
    if (!present(key, true)) return std::nullopt;
    const json& v = p_.at(key);
    std::vector<int> out;
    if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number_integer()) return fail<std::vector<int>>(key + " entries must be integers");
        out.push_back(e.get<int>());
      }
    } else if (v.is_string()) {
      std::istringstream in(v.get<std::string>());
      std::string item;
      while (std::getline(in, item, ',')) {
        try {
          std::size_t used = 0;
          out.push_back(std::stoi(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          return fail<std::vector<int>>(key + " must be a comma-separated list of integers");
        }
      }
    } else {
      return fail<std::vector<int>>(key + " must be a list of integers");
    }
    if (out.empty()) return fail<std::vector<int>>(key + " must not be empty");
    return out;
  }

  void diagnose(std::string message) { diag_.push_back(std::move(message)); }

 private:
  bool present(const std::string& key, bool required) {
    if (p_.contains(key) && !p_.at(key).is_null()) return true;
    if (required) diag_.push_back("missing required parameter '" + key + "'");
    return false;
  }

  template <typename T>
  std::optional<T> fail(std::string message) {
    diag_.push_back(std::move(message));
    return std::nullopt;
  }

  const json& p_;
  std::vector<std::string>& diag_;
};

void check_users(Params& p, const std::optional<long long>& k) {
  if (k && *k < 2) p.diagnose("K must be at least 2");
}

void check_snr(Params& p, const std::optional<double>& snr) {
  if (snr && !(*snr > 0.0)) p.diagnose("snr must be positive");
}

std::optional<std::uint64_t> resolve_seed(const ExperimentSpec& spec, std::vector<std::string>& diag) {
  if (spec.seed) return spec.seed;
  if (const char* env = std::getenv("ERGODIA_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
    }
    diag.emplace_back("ERGODIA_SEED must be an unsigned integer");
    return std::nullopt;
  }
  if (needs_seed(spec.command)) diag.emplace_back("a seed is required (--seed or ERGODIA_SEED)");
  return std::nullopt;
}

struct SimulateArgs {
  NetworkConfig config;
  std::size_t uses = 0;
  std::size_t trials = 1;
  PairingMode mode = PairingMode::Quantized;
};

struct ScalingArgs {
  ScalingSpec spec;
};

// Parses and range-checks every parameter of the requested command.
struct ParsedSpec {
  std::optional<std::uint64_t> seed;
  SimulateArgs simulate;
  BottleneckGraph graph{1, std::set<Link>{}};
  int users = 0;
  bool enumerate = false;
  double snr = 0.0;
  double eps = 0.0;
  double alpha = 0.0;
  std::set<Link> links;
  ScalingArgs scaling;
};

ParsedSpec parse_spec(const ExperimentSpec& spec, std::vector<std::string>& diag) {
  ParsedSpec out;
  const auto table = allowed_params().find(spec.command);
  if (table == allowed_params().end()) {
    diag.push_back("unknown command '" + spec.command + "'");
    return out;
  }
  if (!spec.params.is_object()) {
    diag.emplace_back("params must be a JSON object");
    return out;
  }
  for (const auto& [key, value] : spec.params.items())
    if (!table->second.count(key)) diag.push_back("unknown parameter '" + key + "' for " + spec.command);
  if (spec.format != "csv" && spec.format != "json") diag.emplace_back("format must be csv or json");
  if (spec.workers < 1) diag.emplace_back("workers must be at least 1");
  if (spec.trials_output && spec.command != "scaling") diag.emplace_back("trials output applies to scaling only");
  out.seed = resolve_seed(spec, diag);

  Params p(spec.params, diag);
  const std::string& cmd = spec.command;
  if (cmd == "simulate-alignment") {
    auto k = p.integer("K", true);
    auto snr = p.number("snr", true);
    auto bins = p.integer("bins", true);
    auto uses = p.integer("uses", true);
    auto trials = p.integer("trials", false);
    auto mode = p.text("mode", false);
    auto cross = p.cross("cross");
    check_users(p, k);
    check_snr(p, snr);
    if (bins && (*bins < 2 || *bins % 2 != 0)) p.diagnose("phase_bins must be even");
    if (uses && *uses < 1) p.diagnose("uses must be at least 1");
    if (trials && *trials < 1) p.diagnose("trials must be at least 1");
    if (mode && *mode != "quantized" && *mode != "exact") p.diagnose("mode must be quantized or exact");
    if (k && snr && bins && uses) {
      SimulateArgs& s = out.simulate;
      s.config.users = static_cast<int>(*k);
      s.config.snr = *snr;
      s.config.phase_bins = static_cast<int>(*bins);
      s.config.seed = out.seed.value_or(0);
      if (cross) {
        s.config.cross = *cross;
      } else if (*snr >= 0.0) {
        s.config.cross = CrossDistribution::constant(*snr);
      }
      s.uses = static_cast<std::size_t>(std::max<long long>(*uses, 0));
      s.trials = static_cast<std::size_t>(std::max<long long>(trials.value_or(1), 1));
      if (mode) s.mode = *mode == "exact" ? PairingMode::ExactComplement : PairingMode::Quantized;
    }
  } else if (cmd == "classify-bottleneck" || cmd == "bounds") {
    auto k = p.integer("K", true);
    check_users(p, k);
    auto links = p.links("links");
    if (cmd == "classify-bottleneck" && !spec.params.contains("links")) p.diagnose("missing required parameter 'links'");
    if (cmd == "bounds") {
      auto snr = p.number("snr", true);
      auto eps = p.number("eps", true);
      check_snr(p, snr);
      if (eps && !(*eps >= 0.0)) p.diagnose("eps must be non-negative");
      if (snr) out.snr = *snr;
      if (eps) out.eps = *eps;
    }
    if (k && links && *k >= 2) {
      try {
        out.graph = BottleneckGraph(static_cast<int>(*k), *links);
        out.users = static_cast<int>(*k);
        out.links = *links;
      } catch (const ConfigError& e) {
        p.diagnose(std::string("links: ") + e.what());
      }
    }
  } else if (cmd == "count-minimal") {
    auto k = p.integer("K", true);
    check_users(p, k);
    auto enumerate = p.boolean("enumerate");
    if (k) out.users = static_cast<int>(*k);
    out.enumerate = enumerate.value_or(false);
    if (out.enumerate && k && *k > 8) p.diagnose("enumerate is limited to K <= 8");
    if (k && !out.enumerate && *k > 1000) p.diagnose("K is limited to 1000");
  } else if (cmd == "scaling") {
    auto ks = p.int_list("Ks");
    auto snr = p.number("snr", true);
    auto eps = p.number("eps", true);
    auto trials = p.integer("trials", true);
    auto cross = p.cross("cross");
    if (!spec.params.contains("cross")) p.diagnose("missing required parameter 'cross'");
    check_snr(p, snr);
    if (eps && !(*eps > 0.0)) p.diagnose("eps must be positive");
    if (trials && *trials < 1) p.diagnose("trials must be at least 1");
    if (ks)
      for (int k : *ks)
        if (k < 2) p.diagnose("every K must be at least 2");
    if (ks && snr && eps && trials && cross) {
      ScalingSpec& s = out.scaling.spec;
      s.user_counts = *ks;
      s.snr = *snr;
      s.eps = *eps;
      s.trials = static_cast<std::size_t>(std::max<long long>(*trials, 1));
      s.cross = *cross;
      s.seed = out.seed.value_or(0);
      s.workers = spec.workers;
    }
  } else if (cmd == "separability-demo" || cmd == "inseparability-demo") {
    auto snr = p.number("snr", true);
    check_snr(p, snr);
    if (snr) out.snr = *snr;
    if (cmd == "separability-demo") {
      auto alpha = p.number("alpha", true);
      if (alpha && !(*alpha >= 0.0)) p.diagnose("alpha must be non-negative");
      if (alpha) out.alpha = *alpha;
    }
  }
  return out;
}

// Command result before rendering.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct CommandResult {
  Table table;
  json results;
  std::optional<Table> trials_table;
  json trials_results;
  json resolved;  // derived settings echoed into the metadata
  std::vector<std::string> warnings;
};

std::string links_text(const std::set<Link>& links) {
  std::string s;
  for (const auto& [r, t] : links) {
    if (!s.empty()) s += ',';
    s += std::to_string(r) + ':' + std::to_string(t);
  }
  return s;
}

std::string witness_text(const std::optional<FpmWitness>& w) {
  if (!w) return "";
  std::string s;
  auto group = [&](const std::vector<int>& vs) {
    s += '(';
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? " " : "") + std::to_string(vs[i]);
    s += ')';
  };
  for (const auto& [a, b] : w->edges) group({a, b});
  for (const auto& c : w->odd_cycles) group(c);
  return s;
}

CommandResult execute(const ExperimentSpec& spec, const ParsedSpec& parsed) {
  CommandResult res;
  const std::string& cmd = spec.command;
  if (cmd == "simulate-alignment") {
    const SimulateArgs& a = parsed.simulate;
    const auto trials = run_alignment_trials(a.config, a.uses, a.trials, a.mode, spec.workers);
    const MatchStats merged = merge_stats(trials);
    res.resolved = {{"network", to_json(a.config)}, {"mode", to_string(a.mode)}, {"trials", a.trials}};
    res.table.header = csv_header(a.config.users);
    res.table.header.emplace_back("trial");
    json per_trial = json::array();
    if (trials.size() > 1) {
      for (std::size_t i = 0; i < trials.size(); ++i) {
        auto cells = csv_cells(trials[i]);
        cells.push_back(std::to_string(i));
        res.table.rows.push_back(std::move(cells));
        per_trial.push_back(to_json(trials[i]));
      }
    }
    auto cells = csv_cells(merged);
    cells.emplace_back(trials.size() > 1 ? "all" : "0");
    res.table.rows.push_back(std::move(cells));
    res.results = {{"merged", to_json(merged)}, {"trials", per_trial}};
  } else if (cmd == "classify-bottleneck") {
    const BottleneckGraph& g = parsed.graph;
    const auto witness = find_fpm(g.users(), undirected_edges(g));
    const StateClass c = classify(g);
    res.table.header = {"K", "links", "class", "fpm_witness"};
    res.table.rows.push_back({std::to_string(g.users()), links_text(g.links()), to_string(c), witness_text(witness)});
    res.results = classification_json(g);
    res.results["graph"] = to_json(g);
  } else if (cmd == "count-minimal") {
    const int k = parsed.users;
    const int links = minimal_link_count(k);
    std::string count = "NA";
    if (k % 2 == 0) {
      count = count_minimal_states(k).str();
    } else {
      res.warnings.push_back("the closed-form minimal-state count is only available for even K");
    }
    res.table.header = {"K", "minimal_link_count", "count_minimal_states"};
    res.table.rows.push_back({std::to_string(k), std::to_string(links), count});
    res.results = {{"K", k}, {"minimal_link_count", links}, {"count_minimal_states", count}};
    if (parsed.enumerate) {
      const auto states = enumerate_minimal_states(k);
      res.table.header.emplace_back("enumerated");
      res.table.rows.back().push_back(std::to_string(states.size()));
      res.results["enumerated"] = states.size();
    }
  } else if (cmd == "bounds") {
    std::set<Edge> edges = undirected_edges(parsed.graph);
    const auto report = bounds_report(parsed.users, parsed.snr, parsed.eps, edges);
    res.table.header = {"kind", "value_bits", "provenance"};
    res.results = json::array();
    for (const auto& b : report) {
      res.table.rows.push_back({to_string(b.kind), format_double(b.value), b.provenance});
      res.results.push_back(to_json(b));
    }
  } else if (cmd == "scaling") {
    const ScalingResult r = scaling_experiment(parsed.scaling.spec);
    res.table.header = summary_csv_header();
    res.results = {{"summary", json::array()}, {"trials", json::array()}};
    for (const auto& s : r.summary) {
      res.table.rows.push_back(summary_csv_cells(s));
      res.results["summary"].push_back(to_json(s));
    }
    Table trials;
    trials.header = trial_csv_header();
    for (const auto& t : r.trials) {
      trials.rows.push_back(trial_csv_cells(t));
      res.results["trials"].push_back(to_json(t));
      res.trials_results.push_back(to_json(t));
    }
    res.trials_table = std::move(trials);
    res.warnings = r.warnings;
    res.resolved = {{"cross_dist", to_json(parsed.scaling.spec.cross)}};
  } else if (cmd == "separability-demo") {
    const auto ex = separability_example(parsed.snr, parsed.alpha);
    res.table.header = {"snr", "alpha", "separate", "joint", "joint_feasible", "joint_gt_separate"};
    res.table.rows.push_back({format_double(parsed.snr), format_double(parsed.alpha), format_double(ex.separate),
                              format_double(ex.joint), ex.joint_feasible ? "1" : "0",
                              ex.joint > ex.separate ? "1" : "0"});
    res.results = {{"separate", ex.separate},
                   {"joint", ex.joint},
                   {"joint_feasible", ex.joint_feasible},
                   {"joint_gt_separate", ex.joint > ex.separate}};
  } else if (cmd == "inseparability-demo") {
    const auto ex = inseparability_example(parsed.snr);
    res.table.header = {"snr", "separate", "joint"};
    res.table.rows.push_back({format_double(parsed.snr), format_double(ex.separate), format_double(ex.joint)});
    res.results = {{"separate", ex.separate}, {"joint", ex.joint}};
  }
  return res;
}

json metadata(const ExperimentSpec& spec, const ParsedSpec& parsed, const CommandResult& res,
              std::optional<double> wall) {
  json meta = {{"tool", "ergodia"},
               {"version", kToolVersion},
               {"command", spec.command},
               {"params", spec.params},
               {"seed", parsed.seed ? json(*parsed.seed) : json(nullptr)}};
  if (!res.resolved.is_null()) meta["resolved"] = res.resolved;
  if (!res.warnings.empty()) meta["warnings"] = res.warnings;
  if (wall) meta["wall_time_s"] = *wall;
  return meta;
}

std::string render_csv(const json& meta, const Table& table) {
  std::string out;
  out += "# tool: ergodia " + meta.at("version").get<std::string>() + "\n";
  out += "# command: " + meta.at("command").get<std::string>() + "\n";
  out += "# params: " + meta.at("params").dump() + "\n";
  if (meta.contains("resolved")) out += "# resolved: " + meta.at("resolved").dump() + "\n";
  out += "# seed: " + (meta.at("seed").is_null() ? std::string("none") : meta.at("seed").dump()) + "\n";
  if (meta.contains("warnings"))
    for (const auto& w : meta.at("warnings")) out += "# warning: " + w.get<std::string>() + "\n";
  if (meta.contains("wall_time_s")) out += "# wall_time_s: " + format_double(meta.at("wall_time_s").get<double>()) + "\n";
  out += csv_row(table.header);
  for (const auto& row : table.rows) out += csv_row(row);
  return out;
}

void write_atomically(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> temps;
  try {
    for (const auto& [path, content] : files) {
      const std::string tmp = path + ".partial";
      temps.push_back(tmp);
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot open " + path + " for writing");
      f << content;
      f.close();
      if (!f) throw std::runtime_error("failed writing " + path);
    }
    for (std::size_t i = 0; i < files.size(); ++i) std::filesystem::rename(temps[i], files[i].first);
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
    throw;
  }
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, params] : allowed_params()) v.push_back(name);
    return v;
  }();
  return names;
}

void merge_config_params(ExperimentSpec& spec, const json& config) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : config.items()) {
    std::string name = key;
    json v = value;
    if (key == "seed") {
      if (!spec.seed) {
        if (!value.is_number_unsigned() && !value.is_number_integer()) throw ConfigError("seed must be an integer");
        spec.seed = value.get<std::uint64_t>();
      }
      continue;
    }
    if (key == "phase_bins") name = "bins";
    if (key == "cross_dist") name = "cross";
    if (!spec.params.contains(name)) spec.params[name] = v;
  }
}

ExperimentSpec experiment_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment spec must be a JSON object");
  ExperimentSpec spec;
  try {
    if (j.contains("command")) spec.command = j.at("command").get<std::string>();
    if (j.contains("output")) spec.output = j.at("output").get<std::string>();
    if (j.contains("trials_output")) spec.trials_output = j.at("trials_output").get<std::string>();
    if (j.contains("format")) spec.format = j.at("format").get<std::string>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) spec.workers = j.at("workers").get<unsigned>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad experiment spec: ") + e.what());
  }
  if (j.contains("params")) merge_config_params(spec, j.at("params"));
  json rest = j;
  for (const char* k : {"command", "params", "output", "trials_output", "format", "seed", "workers"}) rest.erase(k);
  merge_config_params(spec, rest);
  return spec;
}

std::vector<std::string> validate(const ExperimentSpec& spec) {
  std::vector<std::string> diag;
  (void)parse_spec(spec, diag);
  return diag;
}

RenderedOutput render(const ExperimentSpec& spec, bool wall_time) {
  std::vector<std::string> diag;
  const ParsedSpec parsed = parse_spec(spec, diag);
  if (!diag.empty()) throw ConfigError(diag.front());

  const auto start = std::chrono::steady_clock::now();
  CommandResult res = execute(spec, parsed);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const json meta = metadata(spec, parsed, res, wall_time ? std::optional<double>(wall) : std::nullopt);

  RenderedOutput out;
  out.warnings = res.warnings;
  if (spec.format == "json") {
    out.payload = json{{"meta", meta}, {"results", res.results}}.dump(2) + "\n";
    if (spec.trials_output) out.trials_payload = json{{"meta", meta}, {"results", res.trials_results}}.dump(2) + "\n";
  } else {
    out.payload = render_csv(meta, res.table);
    if (spec.trials_output && res.trials_table) out.trials_payload = render_csv(meta, *res.trials_table);
  }
  return out;
}

int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
  const auto diag = validate(spec);
  if (!diag.empty()) {
    for (const auto& d : diag) err << "error: " << d << "\n";
    return kExitInvalidSpec;
  }
  RenderedOutput rendered;
  try {
    rendered = render(spec);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidSpec;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  for (const auto& w : rendered.warnings) err << "warning: " << w << "\n";
  try {
    std::vector<std::pair<std::string, std::string>> files;
    if (spec.output) files.emplace_back(*spec.output, rendered.payload);
    if (spec.trials_output) files.emplace_back(*spec.trials_output, rendered.trials_payload);
    write_atomically(files);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  if (!spec.output) out << rendered.payload;
  return kExitOk;
}

}  // namespace ergodia
