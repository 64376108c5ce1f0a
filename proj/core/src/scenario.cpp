#include "mptp/scenario.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mptp/errors.hpp"
#include "mptp/gammafn.hpp"
#include "mptp/numeric.hpp"

namespace mptp {
namespace {

constexpr double kPriorSumTolerance = 1e-9;

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw InvalidParameter(field, what);
}

}  // namespace

Scenario Scenario::from_powers(std::vector<double> powers, std::vector<double> priors,
                               double gain, double noise_var, int samples, int users) {
  Scenario s;
  s.powers_ = std::move(powers);
  s.priors_ = std::move(priors);
  s.gain_ = gain;
  s.noise_var_ = noise_var;
  s.samples_ = samples;
  s.users_ = users;
  s.validate_and_derive();
  return s;
}

void Scenario::validate_and_derive() {
  require(powers_.size() >= 2, "powers", "need P_0 = 0 and at least one nonzero level");
  require(powers_.front() == 0.0, "powers", "P_0 must be exactly 0");
  for (std::size_t i = 1; i < powers_.size(); ++i) {
    require(std::isfinite(powers_[i]) && powers_[i] > powers_[i - 1], "powers",
            "levels must be finite and strictly ascending (index " + std::to_string(i) + ")");
  }
  require(priors_.size() == powers_.size(), "priors",
          "expected " + std::to_string(powers_.size()) + " entries, got " +
              std::to_string(priors_.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < priors_.size(); ++i) {
    require(std::isfinite(priors_[i]) && priors_[i] > 0.0 && priors_[i] <= 1.0, "priors",
            "every prior must lie in (0, 1] (index " + std::to_string(i) + ")");
    total += priors_[i];
  }
  require(std::abs(total - 1.0) <= kPriorSumTolerance, "priors",
          "priors must sum to 1, got " + std::to_string(total));
  require(std::isfinite(gain_) && gain_ > 0.0, "gain", "must be positive");
  require(std::isfinite(noise_var_) && noise_var_ > 0.0, "noise_var", "must be positive");
  require(samples_ >= 1, "samples", "must be a positive integer");
  require(users_ >= 1, "users", "must be a positive integer");

  prior_on_ = std::accumulate(priors_.begin() + 1, priors_.end(), 0.0);
  log_priors_.resize(priors_.size());
  scales_.resize(powers_.size());
  log_scales_.resize(powers_.size());
  for (std::size_t i = 0; i < powers_.size(); ++i) {
    log_priors_[i] = std::log(priors_[i]);
    scales_[i] = gain_ * powers_[i] + noise_var_;
    log_scales_[i] = std::log(scales_[i]);
    if (i > 0) {
      require(scales_[i] > scales_[i - 1], "powers",
              "energy scales γP_i + σ² collapse in floating point (index " +
                  std::to_string(i) + ")");
    }
  }
}

Scenario Scenario::with_samples(int samples) const {
  return from_powers(powers_, priors_, gain_, noise_var_, samples, users_);
}

Scenario Scenario::with_users(int users) const {
  return from_powers(powers_, priors_, gain_, noise_var_, samples_, users);
}

Scenario make_scenario(const ScenarioParams& p) {
  require(!p.power_ratios.empty(), "power_ratios", "need at least one level");
  for (std::size_t i = 0; i < p.power_ratios.size(); ++i) {
    const double r = p.power_ratios[i];
    require(std::isfinite(r) && r > 0.0, "power_ratios", "ratios must be positive");
    require(i == 0 || r > p.power_ratios[i - 1], "power_ratios",
            "ratios must be strictly ascending");
  }
  require(std::isfinite(p.snr_db), "snr_db", "must be finite");
  require(p.priors_on.size() == p.power_ratios.size(), "priors_on",
          "expected one prior per power ratio");
  const double total =
      p.prior_off + std::accumulate(p.priors_on.begin(), p.priors_on.end(), 0.0);
  require(std::abs(total - 1.0) <= kPriorSumTolerance, "priors_on",
          "prior_off + priors_on must sum to 1, got " + std::to_string(total));
  require(p.prior_off > 0.0 && p.prior_off < 1.0, "prior_off", "must lie in (0, 1)");
  require(std::isfinite(p.noise_var) && p.noise_var > 0.0, "noise_var", "must be positive");

  const double n = static_cast<double>(p.power_ratios.size());
  const double ratio_sum = std::accumulate(p.power_ratios.begin(), p.power_ratios.end(), 0.0);
  const double unit = std::pow(10.0, p.snr_db / 10.0) * p.noise_var * n / ratio_sum;

  std::vector<double> powers{0.0};
  std::vector<double> priors{p.prior_off};
  for (std::size_t i = 0; i < p.power_ratios.size(); ++i) {
    powers.push_back(p.power_ratios[i] * unit);
    priors.push_back(p.priors_on[i]);
  }
  return Scenario::from_powers(std::move(powers), std::move(priors), p.gain, p.noise_var,
                               p.samples, p.users);
}

double log_joint(double y, HypothesisIndex i, const Scenario& s) {
  if (!(y > 0.0)) throw DomainError("log_joint: requires y > 0");
  const double m = s.samples();
  return s.log_prior(i) + (m - 1.0) * std::log(y) - y / s.energy_scale(i) -
         m * s.log_energy_scale(i) - gammafn::log_gamma(m);
}

std::vector<double> posterior(double y, const Scenario& s) {
  if (!(y > 0.0)) throw DomainError("posterior: requires y > 0");
  const double m = s.samples();
  std::vector<double> logs(s.num_levels());
  // (M-1) ln y and ln Γ(M) are common to every hypothesis and cancel.
  for (std::size_t i = 0; i < logs.size(); ++i) {
    logs[i] = s.log_prior(i) - y / s.energy_scale(i) - m * s.log_energy_scale(i);
  }
  const double norm = log_sum_exp(logs);
  for (double& v : logs) v = std::exp(v - norm);
  return logs;
}

}  // namespace mptp
