#include "cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mptp/errors.hpp"

namespace mptp::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys{
    "power_ratios", "snr_db", "prior_off", "priors_on", "gain",     "noise_var",
    "samples",      "users",  "strategy",  "axis",      "grid",     "trials",
    "seed",         "sampling_mode",       "rule",      "delta",    "target_pfa",
    "workers",      "cost_matrix"};

template <typename T>
void read(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

bool is_integral(double v) { return std::isfinite(v) && std::floor(v) == v; }

}  // namespace

Strategy parse_strategy(const std::string& text) {
  if (text == "1" || text == "I") return Strategy::I;
  if (text == "2" || text == "II") return Strategy::II;
  throw ConfigError("strategy: expected 1 or 2, got '" + text + "'");
}

SweepAxis parse_axis(const std::string& text) {
  if (text == "samples") return SweepAxis::Samples;
  if (text == "snr_db") return SweepAxis::SnrDb;
  if (text == "users") return SweepAxis::Users;
  throw ConfigError("axis: expected samples, snr_db or users, got '" + text + "'");
}

FusionChoice parse_rule(const std::string& text) {
  if (text == "majority") return FusionChoice::Majority;
  if (text == "optimal") return FusionChoice::Optimal;
  if (text == "both") return FusionChoice::Both;
  throw ConfigError("rule: expected majority, optimal or both, got '" + text + "'");
}

sim::SamplingMode parse_sampling(const std::string& text) {
  if (text == "direct_gamma") return sim::SamplingMode::DirectGamma;
  if (text == "per_sample") return sim::SamplingMode::PerSample;
  throw ConfigError("sampling_mode: expected direct_gamma or per_sample, got '" + text + "'");
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Samples: return "samples";
    case SweepAxis::SnrDb: return "snr_db";
    case SweepAxis::Users: return "users";
  }
  return "?";
}

const char* to_string(FusionChoice rule) {
  switch (rule) {
    case FusionChoice::Majority: return "majority";
    case FusionChoice::Optimal: return "optimal";
    case FusionChoice::Both: return "both";
  }
  return "?";
}

const char* to_string(sim::SamplingMode mode) {
  return mode == sim::SamplingMode::DirectGamma ? "direct_gamma" : "per_sample";
}

RunConfig parse_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
  }

  RunConfig cfg;
  ScenarioParams& sp = cfg.scenario;
  read(doc, "power_ratios", sp.power_ratios);
  read(doc, "snr_db", sp.snr_db);
  read(doc, "prior_off", sp.prior_off);
  read(doc, "priors_on", sp.priors_on);
  read(doc, "gain", sp.gain);
  read(doc, "noise_var", sp.noise_var);
  read(doc, "samples", sp.samples);
  read(doc, "users", sp.users);
  if (doc.contains("strategy")) {
    const json& v = doc["strategy"];
    cfg.strategy = parse_strategy(v.is_string() ? v.get<std::string>() : v.dump());
  }
  std::string text_value;
  if (doc.contains("axis")) {
    read(doc, "axis", text_value);
    cfg.axis = parse_axis(text_value);
  }
  if (doc.contains("grid") && doc["grid"].is_string()) {
    cfg.grid = parse_grid(doc["grid"].get<std::string>());
  } else {
    read(doc, "grid", cfg.grid);
  }
  read(doc, "trials", cfg.trials);
  read(doc, "seed", cfg.seed);
  if (doc.contains("sampling_mode")) {
    read(doc, "sampling_mode", text_value);
    cfg.sampling = parse_sampling(text_value);
  }
  if (doc.contains("rule")) {
    read(doc, "rule", text_value);
    cfg.rule = parse_rule(text_value);
  }
  read(doc, "delta", cfg.delta);
  read(doc, "target_pfa", cfg.target_pfa);
  read(doc, "workers", cfg.workers);
  read(doc, "cost_matrix", cfg.cost_matrix);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::string to_config_json(const RunConfig& cfg) {
  const ScenarioParams& sp = cfg.scenario;
  json doc = {
      {"power_ratios", sp.power_ratios},
      {"snr_db", sp.snr_db},
      {"prior_off", sp.prior_off},
      {"priors_on", sp.priors_on},
      {"gain", sp.gain},
      {"noise_var", sp.noise_var},
      {"samples", sp.samples},
      {"users", sp.users},
      {"strategy", cfg.strategy == Strategy::I ? 1 : 2},
      {"axis", to_string(cfg.axis)},
      {"grid", cfg.grid},
      {"trials", cfg.trials},
      {"seed", cfg.seed},
      {"sampling_mode", to_string(cfg.sampling)},
      {"rule", to_string(cfg.rule)},
      {"delta", cfg.delta},
      {"target_pfa", cfg.target_pfa},
      {"workers", cfg.workers},
      {"cost_matrix", cfg.cost_matrix},
  };
  return doc.dump(2) + "\n";
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto number = [&](const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty()) {
      throw ConfigError("grid: cannot parse '" + token + "'");
    }
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ':')) parts.push_back(number(token));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw ConfigError("grid: expected start:stop:step with step > 0 and stop >= start");
    }
    const auto steps = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    if (steps > 100000) throw ConfigError("grid: too many points");
    for (long k = 0; k <= steps; ++k) out.push_back(parts[0] + k * parts[2]);
    return out;
  }
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(number(token));
  return out;
}

std::vector<double> effective_grid(const RunConfig& cfg) {
  if (!cfg.grid.empty()) return cfg.grid;
  switch (cfg.axis) {
    case SweepAxis::Samples: return parse_grid("500:5000:500");
    case SweepAxis::SnrDb: return parse_grid("-16:-6:1");
    case SweepAxis::Users: return parse_grid("1:10:1");
  }
  return {};
}

void validate(const RunConfig& cfg) {
  const Scenario s = make_scenario(cfg.scenario);
  const std::vector<double> grid = effective_grid(cfg);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k])) throw ConfigError("grid: values must be finite");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw ConfigError("grid: must be strictly ascending");
    if (cfg.axis != SweepAxis::SnrDb && (!is_integral(grid[k]) || grid[k] < 1.0)) {
      throw ConfigError(std::string("grid: ") + to_string(cfg.axis) +
                        " values must be positive integers");
    }
  }
  if (cfg.trials < 1) throw ConfigError("trials: must be at least 1");
  if (cfg.delta < 0 || static_cast<std::size_t>(cfg.delta) > s.num_power_levels()) {
    throw ConfigError("delta: must lie in 0..N");
  }
  if (!(cfg.target_pfa > 0.0 && cfg.target_pfa <= 1.0)) {
    throw ConfigError("target_pfa: must lie in (0, 1]");
  }
  if (!cfg.cost_matrix.empty()) load_cost_matrix(cfg.cost_matrix, s.num_levels());
}

CostMatrix load_cost_matrix(const std::string& path, std::size_t levels) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cost_matrix: cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  try {
    rows = json::parse(in).get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cost_matrix: ") + e.what());
  }
  if (rows.size() != levels) {
    throw ConfigError("cost_matrix: expected " + std::to_string(levels) + " rows");
  }
  return CostMatrix(std::move(rows));
}

}  // namespace mptp::cli
