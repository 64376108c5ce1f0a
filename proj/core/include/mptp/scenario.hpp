#pragma once

#include <cstddef>
#include <vector>

namespace mptp {

// Index of a hypothesis H_i. 0 is "PU absent"; i >= 1 is "PU present at P_i".
using HypothesisIndex = std::size_t;

// Parameterization used by the experiments: relative power ratios for the
// nonzero levels plus an average SNR, (1/N) Σ P_i / σ² = 10^{snr_db/10}.
struct ScenarioParams {
  std::vector<double> power_ratios{3.0, 5.0, 7.0, 9.0};
  double snr_db = -12.0;
  double prior_off = 0.5;
  std::vector<double> priors_on{0.125, 0.125, 0.125, 0.125};
  double gain = 1.0;
  double noise_var = 1.0;
  int samples = 1000;
  int users = 5;

  bool operator==(const ScenarioParams&) const = default;
};

// Statistical model of a single sensing SU: the energy y of M complex
// Gaussian samples is Gamma(M, s_i) distributed under H_i with
// s_i = γ P_i + σ². Immutable once constructed.
class Scenario {
 public:
  // powers = (P_0 = 0, P_1, ..., P_N), priors = (π_0, ..., π_N).
  static Scenario from_powers(std::vector<double> powers, std::vector<double> priors,
                              double gain, double noise_var, int samples, int users = 1);

  std::size_t num_levels() const noexcept { return powers_.size(); }  // N + 1
  std::size_t num_power_levels() const noexcept { return powers_.size() - 1; }  // N

  double power(HypothesisIndex i) const { return powers_.at(i); }
  double prior(HypothesisIndex i) const { return priors_.at(i); }
  double log_prior(HypothesisIndex i) const { return log_priors_.at(i); }
  double prior_on() const noexcept { return prior_on_; }  // Σ_{i>=1} π_i
  const std::vector<double>& powers() const noexcept { return powers_; }
  const std::vector<double>& priors() const noexcept { return priors_; }

  double gain() const noexcept { return gain_; }
  double noise_var() const noexcept { return noise_var_; }
  int samples() const noexcept { return samples_; }
  int users() const noexcept { return users_; }

  // s_i = γ P_i + σ²
  double energy_scale(HypothesisIndex i) const { return scales_.at(i); }
  double log_energy_scale(HypothesisIndex i) const { return log_scales_.at(i); }

  Scenario with_samples(int samples) const;
  Scenario with_users(int users) const;

 private:
  Scenario() = default;
  void validate_and_derive();

  std::vector<double> powers_;
  std::vector<double> priors_;
  std::vector<double> log_priors_;
  std::vector<double> scales_;
  std::vector<double> log_scales_;
  double prior_on_ = 0.0;
  double gain_ = 1.0;
  double noise_var_ = 1.0;
  int samples_ = 1;
  int users_ = 1;
};

Scenario make_scenario(const ScenarioParams& params);

// ln[p(y | H_i) π_i] with the full Gamma(M, s_i) density. Requires y > 0.
double log_joint(double y, HypothesisIndex i, const Scenario& s);

// Pr(H_i | y) for i = 0..N, normalized by log-sum-exp. Requires y > 0.
std::vector<double> posterior(double y, const Scenario& s);

}  // namespace mptp
