// Command-line front end: seeded experiment runs, benchmark sweeps, matrix
// and value-field dumps, and the duality verification suite. Talks to the
// library exclusively through the C interface in sraif.h.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sraif.h"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheck = 3;

/// User-input problem: bad flag value, bad config file, unknown key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Failure propagated from the library, tagged with its status.
struct ApiError : std::runtime_error {
  ApiError(sraif_status s, const std::string& message)
      : std::runtime_error(message), status(s) {}
  sraif_status status;
};

int exit_code_for(sraif_status status) {
  switch (status) {
    case SRAIF_INVALID_ARGUMENT:
    case SRAIF_SHAPE_MISMATCH:
    case SRAIF_INDEX_OUT_OF_RANGE:
    case SRAIF_INVALID_SPEC:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

void check(sraif_status status, const std::string& doing) {
  if (status != SRAIF_OK) {
    throw ApiError(status, doing + " failed [" + sraif_status_name(status) +
                               "]: " + sraif_last_error());
  }
}

// RAII wrappers for the C handles.
struct ModelDeleter {
  void operator()(sraif_model* p) const { sraif_model_free(p); }
};
struct SrDeleter {
  void operator()(sraif_sr* p) const { sraif_sr_free(p); }
};
struct AgentDeleter {
  void operator()(sraif_agent* p) const { sraif_agent_free(p); }
};
struct EpisodeDeleter {
  void operator()(sraif_episode* p) const { sraif_episode_free(p); }
};
using ModelPtr = std::unique_ptr<sraif_model, ModelDeleter>;
using SrPtr = std::unique_ptr<sraif_sr, SrDeleter>;
using AgentPtr = std::unique_ptr<sraif_agent, AgentDeleter>;
using EpisodePtr = std::unique_ptr<sraif_episode, EpisodeDeleter>;

struct Options {
  std::string config_path;
  std::string out_path;  // empty = stdout
  std::uint64_t seed = 0;
  int grid_size = 3;
  int goal = -1;
  std::vector<int> unknowable;
  double step_reward = -1.0;
  double goal_reward = 10.0;
  int max_steps = -1;
  double c_goal = 2.0;
  std::string agent = "sr";
  std::vector<std::string> agents = {"sr", "planner"};
  int episodes = 10;
  double gamma = 0.99;
  double sr_gamma = 0.0;  // <= 0 means "use gamma"
  std::string beta = "8";
  int horizon = 7;
  double w_utility = 1.0;
  double w_epistemic = 1.0;
  std::vector<int> sizes = {3, 4, 5, 6, 7, 8, 9, 10};
  std::string what = "all";
  int states = 10;
  int trials = 200;
};

struct Beta {
  bool greedy = false;
  double value = 0.0;
};

Beta parse_beta(const std::string& text) {
  if (text == "greedy") {
    return {true, 0.0};
  }
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(value) || value <= 0.0) {
    throw ConfigError("beta must be a positive number or \"greedy\", got \"" + text + "\"");
  }
  return {false, value};
}

double effective_sr_gamma(const Options& opts) {
  return opts.sr_gamma > 0.0 ? opts.sr_gamma : opts.gamma;
}

// ---- config file -----------------------------------------------------------

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

int config_int(const ordered_json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw ConfigError("config key \"" + key + "\" must be an integer");
  }
  return value.get<int>();
}

double config_double(const ordered_json& value, const std::string& key) {
  if (!value.is_number()) {
    throw ConfigError("config key \"" + key + "\" must be a number");
  }
  return value.get<double>();
}

std::string config_string(const ordered_json& value, const std::string& key) {
  if (!value.is_string()) {
    throw ConfigError("config key \"" + key + "\" must be a string");
  }
  return value.get<std::string>();
}

std::vector<int> config_int_list(const ordered_json& value, const std::string& key) {
  if (!value.is_array()) {
    throw ConfigError("config key \"" + key + "\" must be an array of integers");
  }
  std::vector<int> out;
  for (const auto& item : value) {
    out.push_back(config_int(item, key));
  }
  return out;
}

/// Applies one config-file entry to the options struct. Key names mirror the
/// CLI flags with underscores.
void apply_config_key(const std::string& key, const ordered_json& value, Options& opts) {
  if (key == "out") {
    opts.out_path = config_string(value, key);
  } else if (key == "seed") {
    if (!value.is_number_integer() || (value.is_number_integer() && !value.is_number_unsigned() &&
                                       value.get<std::int64_t>() < 0)) {
      throw ConfigError("config key \"seed\" must be a nonnegative integer");
    }
    opts.seed = value.get<std::uint64_t>();
  } else if (key == "grid_size") {
    opts.grid_size = config_int(value, key);
  } else if (key == "goal") {
    opts.goal = config_int(value, key);
  } else if (key == "unknowable") {
    opts.unknowable = config_int_list(value, key);
  } else if (key == "step_reward") {
    opts.step_reward = config_double(value, key);
  } else if (key == "goal_reward") {
    opts.goal_reward = config_double(value, key);
  } else if (key == "max_steps") {
    opts.max_steps = config_int(value, key);
  } else if (key == "c_goal") {
    opts.c_goal = config_double(value, key);
  } else if (key == "agent") {
    opts.agent = config_string(value, key);
  } else if (key == "agents") {
    if (!value.is_array()) {
      throw ConfigError("config key \"agents\" must be an array of strings");
    }
    opts.agents.clear();
    for (const auto& item : value) {
      opts.agents.push_back(config_string(item, key));
    }
  } else if (key == "episodes") {
    opts.episodes = config_int(value, key);
  } else if (key == "gamma") {
    opts.gamma = config_double(value, key);
  } else if (key == "sr_gamma") {
    opts.sr_gamma = config_double(value, key);
  } else if (key == "beta") {
    if (value.is_string()) {
      opts.beta = value.get<std::string>();
    } else if (value.is_number()) {
      opts.beta = format_double(value.get<double>());
    } else {
      throw ConfigError("config key \"beta\" must be a number or \"greedy\"");
    }
  } else if (key == "horizon") {
    opts.horizon = config_int(value, key);
  } else if (key == "w_utility") {
    opts.w_utility = config_double(value, key);
  } else if (key == "w_epistemic") {
    opts.w_epistemic = config_double(value, key);
  } else if (key == "sizes") {
    opts.sizes = config_int_list(value, key);
  } else if (key == "what") {
    opts.what = config_string(value, key);
  } else if (key == "states") {
    opts.states = config_int(value, key);
  } else if (key == "trials") {
    opts.trials = config_int(value, key);
  } else {
    throw ConfigError("unknown config key \"" + key + "\"");
  }
}

/// Loads the JSON config file and fills every option the command line did not
/// set explicitly (CLI flags win). `flags` maps config keys to their CLI
/// options; keys the subcommand does not define are hard errors.
void apply_config_file(const std::string& path,
                       const std::map<std::string, CLI::Option*>& flags, Options& opts) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file \"" + path + "\"");
  }
  ordered_json doc = ordered_json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw ConfigError("config file \"" + path + "\" is not valid JSON");
  }
  if (!doc.is_object()) {
    throw ConfigError("config file \"" + path + "\" must hold a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    const auto it = flags.find(key);
    if (it == flags.end()) {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
    if (it->second->count() > 0) {
      continue;  // explicit flag overrides the file
    }
    apply_config_key(key, value, opts);
  }
}

// ---- output ----------------------------------------------------------------

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open output file \"" + out_path + "\"");
  }
  out << text;
}

ordered_json tool_info() {
  return ordered_json{{"name", "sraif"}, {"version", sraif_version()}};
}

ordered_json spec_json(const Options& opts) {
  return ordered_json{
      {"grid_size", opts.grid_size}, {"goal", opts.goal},
      {"unknowable", opts.unknowable}, {"step_reward", opts.step_reward},
      {"goal_reward", opts.goal_reward}, {"max_steps", opts.max_steps},
      {"c_goal", opts.c_goal},
  };
}

ordered_json beta_json(const Beta& beta) {
  if (beta.greedy) {
    return "greedy";
  }
  return beta.value;
}

ordered_json matrix_json(const std::vector<double>& data, int rows, int cols) {
  ordered_json rows_json = ordered_json::array();
  for (int r = 0; r < rows; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < cols; ++c) {
      row.push_back(data[static_cast<std::size_t>(r) * cols + c]);
    }
    rows_json.push_back(std::move(row));
  }
  return ordered_json{{"rows", rows}, {"cols", cols}, {"data", std::move(rows_json)}};
}

/// Value fields carry both the flat vector and the N x N row-major grid.
ordered_json value_field_json(const std::vector<double>& values, int n) {
  ordered_json grid = ordered_json::array();
  for (int r = 0; r < n; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < n; ++c) {
      row.push_back(values[static_cast<std::size_t>(r) * n + c]);
    }
    grid.push_back(std::move(row));
  }
  return ordered_json{{"values", values}, {"grid", std::move(grid)}};
}

std::string csv_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

// ---- shared builders ---------------------------------------------------

sraif_grid_spec make_spec(const Options& opts, int grid_size) {
  sraif_grid_spec spec;
  sraif_grid_spec_init(&spec);
  spec.n = grid_size;
  spec.goal = opts.goal;
  spec.unknowable = opts.unknowable.empty() ? nullptr : opts.unknowable.data();
  spec.num_unknowable = static_cast<int>(opts.unknowable.size());
  spec.step_reward = opts.step_reward;
  spec.goal_reward = opts.goal_reward;
  spec.max_steps = opts.max_steps;
  spec.c_goal = opts.c_goal;
  return spec;
}

AgentPtr make_agent(const std::string& kind, const sraif_model* model, const Options& opts,
                    const Beta& beta) {
  sraif_agent* agent = nullptr;
  if (kind == "sr") {
    check(sraif_sr_agent_create(model, effective_sr_gamma(opts), opts.w_utility,
                                opts.w_epistemic, beta.value, beta.greedy ? 1 : 0, &agent),
          "creating sr agent");
  } else if (kind == "planner") {
    check(sraif_planner_agent_create(model, opts.horizon, beta.value, beta.greedy ? 1 : 0,
                                     opts.gamma, 0, opts.w_utility, opts.w_epistemic, &agent),
          "creating planner agent");
  } else {
    throw ConfigError("agent must be \"sr\" or \"planner\", got \"" + kind + "\"");
  }
  return AgentPtr(agent);
}

ordered_json agent_warnings(const sraif_agent* agent) {
  ordered_json warnings = ordered_json::array();
  for (int i = 0; i < sraif_agent_num_warnings(agent); ++i) {
    warnings.push_back(sraif_agent_warning(agent, i));
  }
  return warnings;
}

// ---- run -------------------------------------------------------------------

int cmd_run(const Options& opts) {
  if (opts.episodes < 1) {
    throw ConfigError("episodes must be >= 1");
  }
  const Beta beta = parse_beta(opts.beta);
  const sraif_grid_spec spec = make_spec(opts, opts.grid_size);

  sraif_model* model_raw = nullptr;
  check(sraif_grid_model_create(&spec, &model_raw), "building grid model");
  ModelPtr model(model_raw);
  AgentPtr agent = make_agent(opts.agent, model.get(), opts, beta);

  ordered_json episode_rows = ordered_json::array();
  double reward_sum = 0.0;
  double reward_sq_sum = 0.0;
  double wall_sum = 0.0;
  double steps_sum = 0.0;
  int successes = 0;
  for (int i = 0; i < opts.episodes; ++i) {
    const std::uint64_t episode_seed = sraif_child_seed(opts.seed, static_cast<std::uint64_t>(i));
    sraif_episode* episode_raw = nullptr;
    check(sraif_run_episode(agent.get(), &spec, episode_seed, &episode_raw),
          "running episode " + std::to_string(i));
    EpisodePtr episode(episode_raw);
    const double reward = sraif_episode_total_reward(episode.get());
    const int steps = sraif_episode_steps(episode.get());
    const bool reached = sraif_episode_reached_goal(episode.get()) != 0;
    reward_sum += reward;
    reward_sq_sum += reward * reward;
    wall_sum += sraif_episode_wall_time_ms(episode.get());
    steps_sum += steps;
    successes += reached ? 1 : 0;
    episode_rows.push_back(ordered_json{
        {"episode", i},
        {"seed", episode_seed},
        {"steps", steps},
        {"total_reward", reward},
        {"reached_goal", reached},
        {"wall_time_ms", sraif_episode_wall_time_ms(episode.get())},
    });
  }

  const double mean_reward = reward_sum / opts.episodes;
  const double variance =
      std::max(0.0, reward_sq_sum / opts.episodes - mean_reward * mean_reward);

  ordered_json agent_info = ordered_json{{"type", opts.agent}};
  if (opts.agent == "sr") {
    agent_info["setup_time_ms"] = sraif_agent_setup_time_ms(agent.get());
    const int n_states = sraif_model_num_states(model.get());
    std::vector<double> value(static_cast<std::size_t>(n_states));
    check(sraif_agent_state_value(agent.get(), value.data()), "reading value function");
    bool finite = true;
    for (double v : value) {
      finite = finite && std::isfinite(v);
    }
    agent_info["value"] = value_field_json(value, opts.grid_size);
    agent_info["value_finite"] = finite;
  } else {
    agent_info["horizon"] = opts.horizon;
  }

  ordered_json report{
      {"tool", tool_info()},
      {"command", "run"},
      {"config",
       ordered_json{{"spec", spec_json(opts)},
                    {"agent", opts.agent},
                    {"episodes", opts.episodes},
                    {"seed", opts.seed},
                    {"seed_formula", sraif_child_seed_formula()},
                    {"gamma", opts.gamma},
                    {"sr_gamma", effective_sr_gamma(opts)},
                    {"beta", beta_json(beta)},
                    {"horizon", opts.horizon},
                    {"w_utility", opts.w_utility},
                    {"w_epistemic", opts.w_epistemic}}},
      {"agent", std::move(agent_info)},
      {"episodes", std::move(episode_rows)},
      {"aggregates",
       ordered_json{{"episodes", opts.episodes},
                    {"mean_reward", mean_reward},
                    {"stddev_reward", std::sqrt(variance)},
                    {"success_rate", static_cast<double>(successes) / opts.episodes},
                    {"mean_steps", steps_sum / opts.episodes},
                    {"mean_wall_time_ms", wall_sum / opts.episodes}}},
      {"warnings", agent_warnings(agent.get())},
  };
  write_output(opts.out_path, report.dump(2) + "\n");
  return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchRow {
  int grid_size = 0;
  std::string agent;
  int episode = 0;
  std::uint64_t seed = 0;
  int steps = 0;
  double total_reward = 0.0;
  bool reached_goal = false;
  double wall_time_ms = 0.0;
  double setup_time_ms = 0.0;
  std::string error;  // empty on success
};

std::string sanitize_note(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') {
      c = ';';
    }
  }
  return text;
}

int cmd_bench(const Options& opts) {
  if (opts.episodes < 1) {
    throw ConfigError("episodes must be >= 1");
  }
  if (opts.sizes.empty()) {
    throw ConfigError("sizes must name at least one grid size");
  }
  for (const std::string& kind : opts.agents) {
    if (kind != "sr" && kind != "planner") {
      throw ConfigError("agents must list \"sr\" and/or \"planner\", got \"" + kind + "\"");
    }
  }
  const Beta beta = parse_beta(opts.beta);

  std::vector<BenchRow> rows;
  for (int size : opts.sizes) {
    // Both agents at a given (size, episode) share a seed, so they face the
    // same start states and the reward comparison is paired.
    const std::uint64_t size_seed = sraif_child_seed(opts.seed, static_cast<std::uint64_t>(size));
    for (const std::string& kind : opts.agents) {
      ModelPtr model;
      AgentPtr agent;
      std::string cell_error;
      const sraif_grid_spec spec = make_spec(opts, size);
      try {
        sraif_model* model_raw = nullptr;
        check(sraif_grid_model_create(&spec, &model_raw),
              "building " + std::to_string(size) + "x" + std::to_string(size) + " model");
        model.reset(model_raw);
        agent = make_agent(kind, model.get(), opts, beta);
      } catch (const ApiError& e) {
        cell_error = std::string(sraif_status_name(e.status)) + ": " + e.what();
      }
      for (int episode = 0; episode < opts.episodes; ++episode) {
        BenchRow row;
        row.grid_size = size;
        row.agent = kind;
        row.episode = episode;
        row.seed = sraif_child_seed(size_seed, static_cast<std::uint64_t>(episode));
        if (!cell_error.empty()) {
          row.error = sanitize_note(cell_error);
          rows.push_back(std::move(row));
          continue;
        }
        try {
          sraif_episode* episode_raw = nullptr;
          check(sraif_run_episode(agent.get(), &spec, row.seed, &episode_raw), "running episode");
          EpisodePtr result(episode_raw);
          row.steps = sraif_episode_steps(result.get());
          row.total_reward = sraif_episode_total_reward(result.get());
          row.reached_goal = sraif_episode_reached_goal(result.get()) != 0;
          row.wall_time_ms = sraif_episode_wall_time_ms(result.get());
          row.setup_time_ms = sraif_agent_setup_time_ms(agent.get());
        } catch (const ApiError& e) {
          row.error = sanitize_note(std::string(sraif_status_name(e.status)) + ": " + e.what());
        }
        rows.push_back(std::move(row));
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.grid_size != b.grid_size) {
      return a.grid_size < b.grid_size;
    }
    if (a.agent != b.agent) {
      return a.agent < b.agent;
    }
    return a.episode < b.episode;
  });

  std::ostringstream csv;
  csv << "grid_size,agent,episode,seed,steps,total_reward,reached_goal,wall_time_ms,"
         "setup_time_ms,error\n";
  for (const BenchRow& row : rows) {
    csv << row.grid_size << ',' << row.agent << ',' << row.episode << ',' << row.seed << ','
        << row.steps << ',' << csv_double(row.total_reward) << ','
        << (row.reached_goal ? "true" : "false") << ',' << csv_double(row.wall_time_ms) << ','
        << csv_double(row.setup_time_ms) << ',' << row.error << '\n';
  }
  write_output(opts.out_path, csv.str());
  return kExitOk;
}

// ---- dump ------------------------------------------------------------------

const std::vector<std::string>& dump_fields() {
  static const std::vector<std::string> fields = {
      "default_b", "successor", "state_value", "efe_value", "utility_value", "entropy"};
  return fields;
}

std::vector<std::string> parse_what(const std::string& what) {
  std::vector<std::string> requested;
  if (what == "all" || what.empty()) {
    return dump_fields();
  }
  std::stringstream stream(what);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) {
      continue;
    }
    if (std::find(dump_fields().begin(), dump_fields().end(), token) == dump_fields().end()) {
      throw ConfigError("unknown dump field \"" + token + "\"");
    }
    requested.push_back(token);
  }
  if (requested.empty()) {
    throw ConfigError("no dump fields requested");
  }
  return requested;
}

int cmd_dump(const Options& opts) {
  const std::vector<std::string> requested = parse_what(opts.what);
  const sraif_grid_spec spec = make_spec(opts, opts.grid_size);

  sraif_model* model_raw = nullptr;
  check(sraif_grid_model_create(&spec, &model_raw), "building grid model");
  ModelPtr model(model_raw);
  const int n_states = sraif_model_num_states(model.get());
  const std::size_t n = static_cast<std::size_t>(n_states);

  const bool needs_sr =
      std::find_if(requested.begin(), requested.end(), [](const std::string& f) {
        return f == "successor" || f == "state_value" || f == "efe_value" ||
               f == "utility_value";
      }) != requested.end();

  SrPtr sr;
  if (needs_sr) {
    sraif_sr* sr_raw = nullptr;
    check(sraif_sr_create(model.get(), effective_sr_gamma(opts), &sr_raw),
          "solving successor matrix");
    sr.reset(sr_raw);
  }

  auto value_for = [&](double w_utility, double w_epistemic) {
    std::vector<double> g(n);
    check(sraif_model_efe_reward(model.get(), w_utility, w_epistemic, g.data()),
          "building reward vector");
    std::vector<double> v(n);
    check(sraif_sr_state_value(sr.get(), g.data(), v.data()), "computing state value");
    return v;
  };

  ordered_json fields;
  for (const std::string& field : requested) {
    if (field == "default_b") {
      std::vector<double> data(n * n);
      check(sraif_model_default_transition(model.get(), data.data()),
            "building default transition");
      fields[field] = matrix_json(data, n_states, n_states);
    } else if (field == "successor") {
      std::vector<double> data(n * n);
      check(sraif_sr_matrix(sr.get(), data.data()), "reading successor matrix");
      fields[field] = matrix_json(data, n_states, n_states);
    } else if (field == "state_value" || field == "efe_value") {
      fields[field] = value_field_json(value_for(opts.w_utility, opts.w_epistemic),
                                       opts.grid_size);
    } else if (field == "utility_value") {
      fields[field] = value_field_json(value_for(opts.w_utility, 0.0), opts.grid_size);
    } else if (field == "entropy") {
      std::vector<double> entropy(n);
      check(sraif_model_entropy(model.get(), entropy.data()), "computing entropy field");
      fields[field] = value_field_json(entropy, opts.grid_size);
    }
  }

  ordered_json warnings = ordered_json::array();
  if (sr) {
    for (int i = 0; i < sraif_sr_num_warnings(sr.get()); ++i) {
      warnings.push_back(sraif_sr_warning(sr.get(), i));
    }
  }

  ordered_json report{
      {"tool", tool_info()},
      {"command", "dump"},
      {"config",
       ordered_json{{"spec", spec_json(opts)},
                    {"gamma", opts.gamma},
                    {"sr_gamma", effective_sr_gamma(opts)},
                    {"w_utility", opts.w_utility},
                    {"w_epistemic", opts.w_epistemic},
                    {"what", requested}}},
      {"fields", std::move(fields)},
      {"warnings", std::move(warnings)},
  };
  write_output(opts.out_path, report.dump(2) + "\n");
  return kExitOk;
}

// ---- duality ---------------------------------------------------------------

int cmd_duality(const Options& opts) {
  if (opts.states < 1) {
    throw ConfigError("states must be >= 1");
  }
  if (opts.trials < 1) {
    throw ConfigError("trials must be >= 1");
  }
  if (opts.horizon < 2) {
    throw ConfigError("horizon must be >= 2");
  }
  sraif_duality_report sweep;
  check(sraif_duality_sweep(opts.states, opts.horizon, opts.trials, opts.seed, &sweep),
        "running duality sweep");

  ordered_json report{
      {"tool", tool_info()},
      {"command", "duality"},
      {"config",
       ordered_json{{"states", opts.states},
                    {"trials", opts.trials},
                    {"horizon", opts.horizon},
                    {"seed", opts.seed},
                    {"seed_formula", sraif_child_seed_formula()}}},
      {"results",
       ordered_json{{"trials", sweep.trials},
                    {"deterministic_trials", sweep.deterministic_trials},
                    {"agreement_failures", sweep.agreement_failures},
                    {"jensen_failures", sweep.jensen_failures},
                    {"equality_failures", sweep.equality_failures},
                    {"occupancy_failures", sweep.occupancy_failures},
                    {"max_agreement_error", sweep.max_agreement_error},
                    {"max_jensen_violation", sweep.max_jensen_violation},
                    {"max_equality_gap", sweep.max_equality_gap},
                    {"max_occupancy_error", sweep.max_occupancy_error},
                    {"passed", sweep.passed != 0}}},
  };
  write_output(opts.out_path, report.dump(2) + "\n");
  return sweep.passed != 0 ? kExitOk : kExitCheck;
}

// ---- flag registration -------------------------------------------------

struct Subcommand {
  CLI::App* app = nullptr;
  Options opts;
  std::map<std::string, CLI::Option*> flags;
};

void add_common_flags(Subcommand& sub) {
  sub.app->add_option("--config", sub.opts.config_path,
                      "JSON config file; explicit flags override its values");
  sub.flags["out"] =
      sub.app->add_option("--out", sub.opts.out_path, "Output path (default: stdout)");
  sub.flags["seed"] = sub.app->add_option("--seed", sub.opts.seed, "Master 64-bit seed");
}

void add_grid_flags(Subcommand& sub) {
  sub.flags["grid_size"] =
      sub.app->add_option("--grid-size", sub.opts.grid_size, "Grid side length N");
  sub.flags["goal"] =
      sub.app->add_option("--goal", sub.opts.goal, "Goal cell index (-1 = bottom-right)");
  sub.flags["unknowable"] = sub.app
                                ->add_option("--unknowable", sub.opts.unknowable,
                                             "Ambiguous cell indices, comma separated")
                                ->delimiter(',');
  sub.flags["step_reward"] =
      sub.app->add_option("--step-reward", sub.opts.step_reward, "Per-step reward");
  sub.flags["goal_reward"] =
      sub.app->add_option("--goal-reward", sub.opts.goal_reward, "Goal reward");
  sub.flags["max_steps"] =
      sub.app->add_option("--max-steps", sub.opts.max_steps, "Episode cap (-1 = 4 N^2)");
  sub.flags["c_goal"] =
      sub.app->add_option("--c-goal", sub.opts.c_goal, "Goal log-preference (nats)");
}

void add_agent_flags(Subcommand& sub) {
  sub.flags["gamma"] = sub.app->add_option("--gamma", sub.opts.gamma, "Discount factor");
  sub.flags["sr_gamma"] = sub.app->add_option(
      "--sr-gamma", sub.opts.sr_gamma, "Successor-matrix discount override (> 1 allowed)");
  sub.flags["beta"] =
      sub.app->add_option("--beta", sub.opts.beta, "Action precision, or \"greedy\"");
  sub.flags["horizon"] =
      sub.app->add_option("--horizon", sub.opts.horizon, "Planner policy length");
  sub.flags["w_utility"] =
      sub.app->add_option("--w-utility", sub.opts.w_utility, "Utility weight");
  sub.flags["w_epistemic"] =
      sub.app->add_option("--w-epistemic", sub.opts.w_epistemic, "Epistemic weight");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Successor-representation active-inference toolkit"};
  app.require_subcommand(1);

  Subcommand run;
  run.app = app.add_subcommand("run", "Run seeded episodes and write a JSON report");
  add_common_flags(run);
  add_grid_flags(run);
  add_agent_flags(run);
  run.flags["agent"] =
      run.app->add_option("--agent", run.opts.agent, "Agent: sr or planner");
  run.flags["episodes"] =
      run.app->add_option("--episodes", run.opts.episodes, "Episode count");

  Subcommand bench;
  bench.opts.episodes = 20;
  bench.app = app.add_subcommand("bench", "Sweep sizes x agents and write a CSV table");
  add_common_flags(bench);
  add_grid_flags(bench);
  add_agent_flags(bench);
  bench.flags["sizes"] = bench.app
                             ->add_option("--sizes", bench.opts.sizes,
                                          "Grid sizes to sweep, comma separated")
                             ->delimiter(',');
  bench.flags["agents"] = bench.app
                              ->add_option("--agents", bench.opts.agents,
                                           "Agents to sweep, comma separated")
                              ->delimiter(',');
  bench.flags["episodes"] =
      bench.app->add_option("--episodes", bench.opts.episodes, "Episodes per cell");

  Subcommand dump;
  dump.app = app.add_subcommand("dump", "Dump matrices and value fields as JSON");
  add_common_flags(dump);
  add_grid_flags(dump);
  add_agent_flags(dump);
  dump.flags["what"] = dump.app->add_option(
      "--what", dump.opts.what,
      "Comma-separated subset of default_b,successor,state_value,efe_value,"
      "utility_value,entropy (default all)");

  Subcommand duality;
  duality.opts.horizon = 6;
  duality.app = app.add_subcommand("duality", "Verify the control-as-inference identities");
  add_common_flags(duality);
  duality.flags["states"] =
      duality.app->add_option("--states", duality.opts.states, "Max states per instance");
  duality.flags["trials"] =
      duality.app->add_option("--trials", duality.opts.trials, "Instances to sample");
  duality.flags["horizon"] =
      duality.app->add_option("--horizon", duality.opts.horizon, "Max recursion horizon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Subcommand* active = nullptr;
  for (Subcommand* sub : {&run, &bench, &dump, &duality}) {
    if (sub->app->parsed()) {
      active = sub;
      break;
    }
  }

  try {
    if (!active->opts.config_path.empty()) {
      apply_config_file(active->opts.config_path, active->flags, active->opts);
    }
    if (active == &run) {
      return cmd_run(run.opts);
    }
    if (active == &bench) {
      return cmd_bench(bench.opts);
    }
    if (active == &dump) {
      return cmd_dump(dump.opts);
    }
    return cmd_duality(duality.opts);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
