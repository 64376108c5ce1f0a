#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mptp/metrics.hpp"
#include "mptp/regions.hpp"
#include "mptp/scenario.hpp"
#include "mptp/simkit.hpp"

namespace mptp::cli {

// Raised for malformed configuration documents and flag values (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { Samples, SnrDb, Users };
enum class FusionChoice { Majority, Optimal, Both };

// Everything a command needs. Defaults reproduce the reference experiment:
// P_1:P_2:P_3:P_4 = 3:5:7:9, π_0 = 0.5, π_i = 0.125, γ = σ² = 1, -12 dB.
struct RunConfig {
  ScenarioParams scenario;
  Strategy strategy = Strategy::I;
  SweepAxis axis = SweepAxis::Samples;
  std::vector<double> grid;  // empty: default grid for the axis
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 0x5EED;
  sim::SamplingMode sampling = sim::SamplingMode::DirectGamma;
  FusionChoice rule = FusionChoice::Both;
  int delta = 0;  // 0: every offset, otherwise only this one
  double target_pfa = 0.1;
  unsigned workers = 0;
  std::string cost_matrix;  // path to a JSON array of arrays; empty: 0-1 loss

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config_json(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string to_config_json(const RunConfig& cfg);

// Throws ConfigError or InvalidParameter naming the offending field.
void validate(const RunConfig& cfg);

// "start:stop:step" (inclusive) or "a,b,c".
std::vector<double> parse_grid(const std::string& text);
std::vector<double> effective_grid(const RunConfig& cfg);

Strategy parse_strategy(const std::string& text);
SweepAxis parse_axis(const std::string& text);
FusionChoice parse_rule(const std::string& text);
sim::SamplingMode parse_sampling(const std::string& text);
const char* to_string(SweepAxis axis);
const char* to_string(FusionChoice rule);
const char* to_string(sim::SamplingMode mode);

CostMatrix load_cost_matrix(const std::string& path, std::size_t levels);

}  // namespace mptp::cli
