#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include <mptp/errors.hpp>
#include <mptp/scenario.hpp>

namespace {

using mptp::make_scenario;
using mptp::Scenario;
using mptp::ScenarioParams;

TEST(MakeScenario, DefaultPowersAtMinus12Db) {
  const Scenario s = make_scenario(ScenarioParams{});
  const double expected[] = {0.0315478, 0.0525797, 0.0736115, 0.0946434};
  ASSERT_EQ(s.num_levels(), 5u);
  EXPECT_EQ(s.power(0), 0.0);
  for (std::size_t i = 1; i <= 4; ++i) EXPECT_NEAR(s.power(i), expected[i - 1], 1e-6);

  double mean = 0.0;
  for (std::size_t i = 1; i <= 4; ++i) mean += s.power(i) / 4.0;
  EXPECT_NEAR(mean / s.noise_var(), std::pow(10.0, -1.2), 1e-12);
}

TEST(MakeScenario, EnergyScales) {
  ScenarioParams p;
  p.gain = 0.5;
  p.noise_var = 2.0;
  const Scenario s = make_scenario(p);
  for (std::size_t i = 0; i < s.num_levels(); ++i) {
    EXPECT_DOUBLE_EQ(s.energy_scale(i), 0.5 * s.power(i) + 2.0);
    EXPECT_DOUBLE_EQ(s.log_energy_scale(i), std::log(s.energy_scale(i)));
  }
  EXPECT_DOUBLE_EQ(s.prior_on(), 0.5);
}

TEST(MakeScenario, RejectsPriorsNotSummingToOne) {
  ScenarioParams p;
  p.power_ratios = {1.0, 2.0};
  p.prior_off = 0.5;
  p.priors_on = {0.3, 0.3};
  EXPECT_THROW(make_scenario(p), mptp::InvalidParameter);
}

TEST(MakeScenario, ReportsOffendingField) {
  ScenarioParams p;
  p.power_ratios = {3.0, 2.0, 7.0, 9.0};
  try {
    make_scenario(p);
    FAIL() << "expected InvalidParameter";
  } catch (const mptp::InvalidParameter& e) {
    EXPECT_EQ(e.field(), "power_ratios");
  }
  p = ScenarioParams{};
  p.noise_var = 0.0;
  EXPECT_THROW(make_scenario(p), mptp::InvalidParameter);
  p = ScenarioParams{};
  p.samples = 0;
  EXPECT_THROW(make_scenario(p), mptp::InvalidParameter);
  p = ScenarioParams{};
  p.priors_on = {0.25, 0.25, 0.0, 0.0};
  EXPECT_THROW(make_scenario(p), mptp::InvalidParameter);
}

TEST(FromPowers, Validates) {
  EXPECT_THROW(Scenario::from_powers({0.0, 1.0}, {0.5, 0.5, 0.0}, 1, 1, 1),
               mptp::InvalidParameter);
  EXPECT_THROW(Scenario::from_powers({0.0, 2.0, 1.0}, {0.4, 0.3, 0.3}, 1, 1, 1),
               mptp::InvalidParameter);
  EXPECT_THROW(Scenario::from_powers({0.1, 1.0}, {0.5, 0.5}, 1, 1, 1),
               mptp::InvalidParameter);
  EXPECT_NO_THROW(Scenario::from_powers({0.0, 1.0}, {0.5, 0.5}, 1, 1, 1));
}

TEST(LogJoint, HandValues) {
  const Scenario exp1 = Scenario::from_powers({0.0, 1.0}, {0.5, 0.5}, 1.0, 1.0, 1);
  // s_0 = 1, π_0 = 0.5: ln(0.5 e^{-1}).
  EXPECT_NEAR(mptp::log_joint(1.0, 0, exp1), std::log(0.5) - 1.0, 1e-14);

  // Gamma(2, 2) density at y = 2 weighted by 0.5.
  const Scenario g = Scenario::from_powers({0.0, 1.0}, {0.5, 0.5}, 1.0, 1.0, 2);
  EXPECT_NEAR(mptp::log_joint(2.0, 1, g), std::log(0.5 * 2.0 * std::exp(-1.0) / 4.0), 1e-12);
}

TEST(LogJoint, DensityIntegratesToPrior) {
  const Scenario s = make_scenario(ScenarioParams{}).with_samples(50);
  for (std::size_t i = 0; i < s.num_levels(); ++i) {
    const double scale = s.energy_scale(i);
    const double hi = 50.0 * scale * 4.0;
    const int steps = 200000;
    const double h = hi / steps;
    double sum = 0.0;  // Simpson on (0, hi]; the integrand vanishes at both ends
    for (int k = 1; k < steps; ++k) {
      sum += (k % 2 ? 4.0 : 2.0) * std::exp(mptp::log_joint(k * h, i, s));
    }
    EXPECT_NEAR(sum * h / 3.0, s.prior(i), 1e-6) << "level " << i;
  }
}

TEST(Posterior, NormalizedAndHeavyTailWins) {
  const Scenario s = make_scenario(ScenarioParams{});
  for (double y : {500.0, 1000.0, 1050.0, 1100.0}) {
    const auto post = mptp::posterior(y, s);
    EXPECT_NEAR(std::accumulate(post.begin(), post.end(), 0.0), 1.0, 1e-12);
  }
  const double big = 100.0 * s.samples() * s.energy_scale(4);
  const auto post = mptp::posterior(big, s);
  EXPECT_EQ(std::max_element(post.begin(), post.end()) - post.begin(), 4);
}

TEST(Posterior, MatchesLogJointRatios) {
  const Scenario s = make_scenario(ScenarioParams{});
  const double y = 1040.0;
  const auto post = mptp::posterior(y, s);
  for (std::size_t i = 1; i < s.num_levels(); ++i) {
    EXPECT_NEAR(std::log(post[i] / post[0]),
                mptp::log_joint(y, i, s) - mptp::log_joint(y, 0, s), 1e-9);
  }
}

TEST(LogJoint, RejectsNonPositiveEnergy) {
  const Scenario s = make_scenario(ScenarioParams{});
  EXPECT_THROW(mptp::log_joint(0.0, 0, s), mptp::DomainError);
  EXPECT_THROW(mptp::posterior(-1.0, s), mptp::DomainError);
}

TEST(Scenario, WithSamplesAndUsers) {
  const Scenario s = make_scenario(ScenarioParams{});
  EXPECT_EQ(s.with_samples(200).samples(), 200);
  EXPECT_EQ(s.with_users(9).users(), 9);
  EXPECT_THROW(s.with_samples(0), mptp::InvalidParameter);
}

}  // namespace
