#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mptp/errors.hpp"
#include "mptp/fusion.hpp"
#include "mptp/gammafn.hpp"
#include "mptp/metrics.hpp"
#include "mptp/regions.hpp"
#include "mptp/simkit.hpp"

namespace mptp::cli {
namespace {

// Majority fusion is cross-checked against plain enumeration up to this many
// vote vectors.
constexpr std::uint64_t kCrossCheckLimit = 200'000;
constexpr double kCrossCheckTolerance = 1e-12;

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

Scenario scenario_at(const RunConfig& cfg, double axis_value) {
  ScenarioParams p = cfg.scenario;
  switch (cfg.axis) {
    case SweepAxis::Samples: p.samples = static_cast<int>(axis_value); break;
    case SweepAxis::SnrDb: p.snr_db = axis_value; break;
    case SweepAxis::Users: p.users = static_cast<int>(axis_value); break;
  }
  return make_scenario(p);
}

std::string join(const std::vector<HypothesisIndex>& v) {
  if (v.empty()) return "none";
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

DecisionMatrix checked_majority(const DecisionMatrix& local, int users) {
  DecisionMatrix closed = fusion::majority_matrix_closed(local, users);
  if (fusion::vote_vector_count(users, static_cast<int>(local.size()) - 1) <= kCrossCheckLimit) {
    const DecisionMatrix enumerated = fusion::majority_matrix(local, users);
    for (HypothesisIndex i = 0; i < local.size(); ++i) {
      for (HypothesisIndex j = 0; j < local.size(); ++j) {
        if (std::abs(closed.at(i, j) - enumerated.at(i, j)) > kCrossCheckTolerance) {
          throw ConsistencyError("majority closed form differs from enumeration at (" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
    }
  }
  return closed;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CommandOutput cmd_regions(const RunConfig& cfg) {
  validate(cfg);
  const Scenario s = make_scenario(cfg.scenario);
  const DecisionRegions r = build_regions(s, cfg.strategy);
  CsvWriter csv({"strategy", "level", "power", "prior", "lower", "upper", "masked"});
  for (HypothesisIndex i = 0; i < s.num_levels(); ++i) {
    csv.row({to_string(cfg.strategy), fmt(i), fmt(s.power(i)), fmt(s.prior(i)),
             fmt(r.lower(i)), fmt(r.upper(i)), r.is_masked(i) ? "1" : "0"});
  }
  CommandOutput out{csv.str(), {}};
  out.notes.push_back("on/off threshold: " + fmt(r.onoff_threshold()));
  out.notes.push_back("masked levels: " + join(r.masked()));
  if (!has_mutual_masking(s, r)) out.notes.push_back("no mutual masking among nonzero levels");
  return out;
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.axis == SweepAxis::Users) throw ConfigError("axis: sweep supports samples or snr_db");
  CsvWriter csv({"axis_value", "strategy", "p_fa", "p_d", "p_dis1", "p_dis2", "masked_count"});
  for (double x : effective_grid(cfg)) {
    const Scenario s = scenario_at(cfg, x);
    for (Strategy st : {Strategy::I, Strategy::II}) {
      const DecisionRegions r = build_regions(s, st);
      const DecisionMatrix q = decision_matrix(s, r);
      const DetectionPair pd = pfa_pd(q, s);
      csv.row({fmt(x), to_string(st), fmt(pd.p_fa), fmt(pd.p_d),
               fmt(discrimination(q, s, Discrimination::Dis1)),
               fmt(discrimination(q, s, Discrimination::Dis2)), fmt(r.masked_count())});
    }
  }
  return {csv.str(), {}};
}

CommandOutput cmd_montecarlo(const RunConfig& cfg) {
  validate(cfg);
  const Scenario s = make_scenario(cfg.scenario);
  const DecisionRegions r = build_regions(s, cfg.strategy);
  const DecisionMatrix analytic = decision_matrix(s, r);
  const sim::TrialPlan plan{cfg.trials, cfg.seed, cfg.sampling};
  const DecisionMatrix empirical = sim::empirical_matrix(plan, s, r, cfg.workers);

  CsvWriter csv({"strategy", "true_level", "decided_level", "analytic", "empirical",
                 "std_error", "trials"});
  double max_diff = 0.0;
  double max_se = 0.0;
  const double trials = static_cast<double>(cfg.trials);
  for (HypothesisIndex i = 0; i < s.num_levels(); ++i) {
    for (HypothesisIndex j = 0; j < s.num_levels(); ++j) {
      const double q = analytic.at(i, j);
      const double se = std::sqrt(q * (1.0 - q) / trials);
      max_diff = std::max(max_diff, std::abs(q - empirical.at(i, j)));
      max_se = std::max(max_se, se);
      csv.row({to_string(cfg.strategy), fmt(i), fmt(j), fmt(q), fmt(empirical.at(i, j)),
               fmt(se), std::to_string(cfg.trials)});
    }
  }
  return {csv.str(),
          {"max |analytic - empirical| = " + fmt(max_diff) + ", max std error = " + fmt(max_se)}};
}

CommandOutput cmd_fusion(const RunConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.scenario.power_ratios.size();
  std::vector<std::string> header{"axis_value", "rule", "p_fa", "p_d", "p_dis1"};
  std::vector<std::size_t> deltas;
  for (std::size_t d = 1; d <= n; ++d) {
    if (cfg.delta == 0 || static_cast<std::size_t>(cfg.delta) == d) deltas.push_back(d);
  }
  for (std::size_t d : deltas) header.push_back("error_delta_" + std::to_string(d));
  CsvWriter csv(header);

  auto emit = [&](double x, const char* rule, const DecisionMatrix& fused, const Scenario& s) {
    const DetectionPair pd = pfa_pd(fused, s);
    std::vector<std::string> cells{fmt(x), rule, fmt(pd.p_fa), fmt(pd.p_d),
                                   fmt(discrimination(fused, s, Discrimination::Dis1))};
    for (std::size_t d : deltas) cells.push_back(fmt(offset_error(fused, s, d)));
    csv.row(cells);
  };

  for (double x : effective_grid(cfg)) {
    const Scenario s = scenario_at(cfg, x);
    const DecisionMatrix local = decision_matrix(s, build_regions(s, cfg.strategy));
    const int users = s.users();
    if (cfg.rule != FusionChoice::Optimal) emit(x, "majority", checked_majority(local, users), s);
    if (cfg.rule != FusionChoice::Majority) {
      emit(x, "optimal", fusion::optimal_matrix(s, local, users), s);
    }
  }
  return {csv.str(), {}};
}

CommandOutput cmd_np_threshold(const RunConfig& cfg) {
  validate(cfg);
  const Scenario s = make_scenario(cfg.scenario);
  const double theta = np_threshold(s, cfg.target_pfa);
  const double m = s.samples();
  const double p_fa = 1.0 - gammafn::reg_lower_gamma(m, theta / s.noise_var());
  double p_d = 0.0;
  for (HypothesisIndex i = 1; i < s.num_levels(); ++i) {
    p_d += s.prior(i) * (1.0 - gammafn::reg_lower_gamma(m, theta / s.energy_scale(i)));
  }
  p_d /= s.prior_on();
  CsvWriter csv({"samples", "target_pfa", "threshold", "p_fa", "p_d"});
  csv.row({std::to_string(s.samples()), fmt(cfg.target_pfa), fmt(theta), fmt(p_fa), fmt(p_d)});
  return {csv.str(), {}};
}

CommandOutput cmd_decide(const RunConfig& cfg, const std::vector<double>& energies) {
  validate(cfg);
  if (energies.empty()) throw ConfigError("energy: need at least one value");
  const Scenario s = make_scenario(cfg.scenario);
  const DecisionRegions r1 = build_regions(s, Strategy::I);
  const DecisionRegions r2 = build_regions(s, Strategy::II);
  const CostMatrix costs = cfg.cost_matrix.empty()
                               ? CostMatrix::zero_one(s.num_levels())
                               : load_cost_matrix(cfg.cost_matrix, s.num_levels());
  CsvWriter csv({"energy", "strategy_1", "strategy_2", "bayes_risk"});
  for (double y : energies) {
    if (!(y > 0.0)) throw ConfigError("energy: values must be positive");
    csv.row({fmt(y), fmt(classify(y, r1)), fmt(classify(y, r2)),
             fmt(bayes_risk_decide(y, s, costs))});
  }
  return {csv.str(), {}};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidParameter*>(&e)) {
    return 2;
  }
  if (dynamic_cast<const DegenerateThreshold*>(&e)) return 3;
  if (dynamic_cast<const ResourceLimit*>(&e)) return 4;
  return 1;
}

}  // namespace mptp::cli
