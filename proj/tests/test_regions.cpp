#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include <mptp/errors.hpp>
#include <mptp/gammafn.hpp>
#include <mptp/regions.hpp>
#include <mptp/scenario.hpp>
#include <mptp/simkit.hpp>

#include "support/random_scenarios.hpp"

namespace {

using namespace mptp;

Scenario default_scenario() { return make_scenario(ScenarioParams{}); }

// Root of log_joint(y, i) = log_joint(y, j) by plain bisection on a wide bracket.
double crossing_by_bisection(HypothesisIndex i, HypothesisIndex j, const Scenario& s) {
  auto gap = [&](double y) { return log_joint(y, i, s) - log_joint(y, j, s); };
  double lo = 1e-9, hi = 1e7;
  const bool lo_sign = gap(lo) > 0.0;
  for (int it = 0; it < 400 && lo < hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    ((gap(mid) > 0.0) == lo_sign ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

HypothesisIndex posterior_argmax(double y, const Scenario& s) {
  const auto post = posterior(y, s);
  HypothesisIndex best = 0;
  for (HypothesisIndex i = 1; i < post.size(); ++i) {
    if (post[i] >= post[best]) best = i;
  }
  return best;
}

TEST(ThetaPair, SymbolicReduction) {
  const Scenario s = Scenario::from_powers({0.0, 1.0}, {0.5, 0.5}, 1.0, 1.0, 1);
  EXPECT_NEAR(theta_pair(1, 0, s), 2.0 * std::log(2.0), 1e-12);
  EXPECT_NEAR(theta_pair(0, 1, s), 2.0 * std::log(2.0), 1e-12);
  EXPECT_THROW(theta_pair(1, 1, s), DomainError);
}

TEST(ThetaPair, MatchesNumericalCrossing) {
  const Scenario s = default_scenario();
  const double oracle = crossing_by_bisection(1, 2, s);
  EXPECT_NEAR(theta_pair(1, 2, s), oracle, 1e-8 * oracle);
  for (HypothesisIndex i = 0; i < s.num_levels(); ++i) {
    for (HypothesisIndex j = i + 1; j < s.num_levels(); ++j) {
      EXPECT_DOUBLE_EQ(theta_pair(i, j, s), theta_pair(j, i, s));
    }
  }
}

TEST(SolveThetaOnOff, SignChangeAtRoot) {
  const Scenario s = default_scenario();
  const double theta = solve_theta_onoff(s);
  ASSERT_TRUE(std::isfinite(theta));
  ASSERT_GT(theta, 0.0);
  EXPECT_LT(onoff_objective(theta * (1.0 - 1e-6), s), 0.0);
  EXPECT_GT(onoff_objective(theta * (1.0 + 1e-6), s), 0.0);
}

TEST(SolveThetaOnOff, SingleLevelIsPairCrossing) {
  const Scenario s = Scenario::from_powers({0.0, 0.2}, {0.6, 0.4}, 1.0, 1.0, 300);
  const double pair = theta_pair(0, 1, s);
  EXPECT_NEAR(solve_theta_onoff(s), pair, 1e-12 * pair);
  EXPECT_NEAR(phi_onoff(s), solve_theta_onoff(s), 1e-12 * pair);
}

TEST(SolveThetaOnOff, DegenerateWhenSilenceNeverWins) {
  // Φ(0) >= 0: the on-hypotheses already outweigh H_0 at y -> 0.
  const Scenario s = Scenario::from_powers({0.0, 0.01, 0.02}, {0.1, 0.45, 0.45}, 1.0, 1.0, 1);
  EXPECT_THROW(solve_theta_onoff(s), DegenerateThreshold);
  EXPECT_THROW(build_regions(s, Strategy::I), DegenerateThreshold);
  EXPECT_THROW(build_regions(s, Strategy::II), DegenerateThreshold);
}

TEST(PhiOnOff, MatchesStrategyTwoFirstThreshold) {
  const Scenario s = default_scenario();
  const DecisionRegions r = build_regions(s, Strategy::II);
  EXPECT_NEAR(phi_onoff(s), r.lower(1), 1e-10 * r.lower(1));
  EXPECT_GT(phi_onoff(s), solve_theta_onoff(s));
}

TEST(BuildRegions, DefaultScenarioValues) {
  const Scenario s = default_scenario();
  const DecisionRegions one = build_regions(s, Strategy::I);
  const double expected[] = {0.0, 1031.613155, 1041.993074, 1063.026385, 1084.059642};
  ASSERT_EQ(one.thresholds().size(), 6u);
  for (int i = 1; i < 5; ++i) EXPECT_NEAR(one.thresholds()[i], expected[i], 1e-5);
  EXPECT_TRUE(std::isinf(one.thresholds()[5]));
  EXPECT_EQ(one.masked_count(), 0u);
  EXPECT_DOUBLE_EQ(one.onoff_threshold(), solve_theta_onoff(s));

  const DecisionRegions two = build_regions(s, Strategy::II);
  EXPECT_EQ(two.masked(), std::vector<HypothesisIndex>{1});
  for (int i = 3; i < 5; ++i) EXPECT_DOUBLE_EQ(two.thresholds()[i], one.thresholds()[i]);
}

TEST(BuildRegions, HighPriorOffMasksLowLevel) {
  ScenarioParams p;
  p.power_ratios = {1.0, 2.0};
  p.prior_off = 0.98;
  p.priors_on = {0.01, 0.01};
  p.snr_db = -10.0;
  p.samples = 10;
  const Scenario s = make_scenario(p);
  const DecisionRegions r = build_regions(s, Strategy::II);
  EXPECT_TRUE(r.is_masked(1));
  EXPECT_FALSE(r.is_masked(0));
  EXPECT_FALSE(r.is_masked(2));

  // Level 1 never attains the posterior maximum.
  for (double y = 0.01; y < 200.0; y += 0.01) {
    EXPECT_NE(posterior_argmax(y, s), 1u) << "y=" << y;
  }
  EXPECT_FALSE(has_mutual_masking(s, r));  // masked by H_0, not by level 2
}

TEST(BuildRegions, EnvelopeAgreesWithPairwiseOnRandomScenarios) {
  testkit::ScenarioGenerator gen(17);
  for (int n = 0; n < 100; ++n) {
    const Scenario s = gen.scenario();
    for (Strategy st : {Strategy::I, Strategy::II}) {
      const DecisionRegions env = envelope_regions(s, st);
      EXPECT_EQ(compare_regions(env, pairwise_bounds(s, st)), "") << "scenario " << n;
    }
  }
}

TEST(Classify, StrategyTwoIsPosteriorArgmax) {
  testkit::ScenarioGenerator gen(23);
  for (int n = 0; n < 20; ++n) {
    const Scenario s = gen.scenario();
    const DecisionRegions r = build_regions(s, Strategy::II);
    const double top = 2.0 * s.samples() * s.energy_scale(s.num_levels() - 1);
    for (int k = 1; k <= 2000; ++k) {
      const double y = top * k / 2000.0;
      EXPECT_EQ(classify(y, r), posterior_argmax(y, s)) << "scenario " << n << " y=" << y;
    }
  }
}

TEST(Posterior, ArgmaxNondecreasingInEnergy) {
  testkit::ScenarioGenerator gen(37);
  for (int n = 0; n < 20; ++n) {
    const Scenario s = gen.scenario();
    const double top = 2.0 * s.samples() * s.energy_scale(s.num_levels() - 1);
    HypothesisIndex prev = 0;
    for (int k = 1; k <= 2000; ++k) {
      const HypothesisIndex cur = posterior_argmax(top * k / 2000.0, s);
      EXPECT_GE(cur, prev);
      prev = cur;
    }
  }
}

TEST(ThetaPair, IncreasingInUpperPowerForEqualPriors) {
  for (double pj = 0.02; pj < 0.2; pj += 0.01) {
    const Scenario a = Scenario::from_powers({0.0, 0.01, pj}, {0.4, 0.3, 0.3}, 1.0, 1.0, 800);
    const Scenario b =
        Scenario::from_powers({0.0, 0.01, pj + 0.005}, {0.4, 0.3, 0.3}, 1.0, 1.0, 800);
    EXPECT_LT(theta_pair(1, 2, a), theta_pair(1, 2, b)) << "P_j=" << pj;
  }
}

TEST(Classify, BoundaryConventions) {
  const Scenario s = default_scenario();
  const DecisionRegions r = build_regions(s, Strategy::I);
  EXPECT_EQ(classify(r.onoff_threshold() * 0.999, r), 0u);
  EXPECT_EQ(classify(1e6 * s.samples() * s.energy_scale(4), r), 4u);
  for (HypothesisIndex i = 1; i < r.num_levels(); ++i) EXPECT_EQ(classify(r.lower(i), r), i);
}

TEST(Classify, StrategyOneKeepsSilenceBelowTheta) {
  testkit::ScenarioGenerator gen(29);
  for (int n = 0; n < 20; ++n) {
    const Scenario s = gen.scenario();
    const DecisionRegions r = build_regions(s, Strategy::I);
    EXPECT_EQ(classify(r.onoff_threshold() * (1 - 1e-9), r), 0u);
    EXPECT_NE(classify(r.onoff_threshold() * (1 + 1e-9), r), 0u);
  }
}

TEST(EqualPriors, NoMutualMasking) {
  testkit::ScenarioGenerator gen(31);
  for (int n = 0; n < 30; ++n) {
    const Scenario s = gen.scenario(true);
    for (Strategy st : {Strategy::I, Strategy::II}) {
      EXPECT_FALSE(has_mutual_masking(s, build_regions(s, st)));
    }
  }
}

TEST(EqualPriors, AllEqualPriorsShareInnerThresholds) {
  const Scenario s = Scenario::from_powers({0.0, 0.03, 0.05, 0.07, 0.09}, std::vector(5, 0.2),
                                           1.0, 1.0, 2000);
  const DecisionRegions one = build_regions(s, Strategy::I);
  const DecisionRegions two = build_regions(s, Strategy::II);
  EXPECT_NE(one.onoff_threshold(), two.onoff_threshold());
  for (std::size_t k = 2; k <= 4; ++k) {
    EXPECT_NEAR(one.thresholds()[k], two.thresholds()[k], 1e-9 * one.thresholds()[k]);
  }
}

TEST(DecisionRegions, ValidatesThresholds) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(DecisionRegions(Strategy::I, {0.0, 2.0, 1.0, inf}, 2.0), ConsistencyError);
  EXPECT_THROW(DecisionRegions(Strategy::I, {0.0, 1.0, 2.0, 5.0}, 1.0), ConsistencyError);
  EXPECT_THROW(DecisionRegions(Strategy::I, {0.0, 1.0, 2.0, inf}, 1.5), ConsistencyError);
  EXPECT_NO_THROW(DecisionRegions(Strategy::I, {0.0, 1.0, 1.0, inf}, 1.0));
}

TEST(NpThreshold, HandValues) {
  const Scenario s = default_scenario();
  EXPECT_EQ(np_threshold(s, 1.0), 0.0);
  const Scenario one = Scenario::from_powers({0.0, 1.0}, {0.5, 0.5}, 1.0, 1.0, 1);
  EXPECT_NEAR(np_threshold(one, std::exp(-1.0)), 1.0, 1e-9);
  EXPECT_THROW(np_threshold(s, 0.0), DomainError);
  EXPECT_THROW(np_threshold(s, 1.5), DomainError);
}

TEST(NpThreshold, MonteCarloFalseAlarmRate) {
  const Scenario s = default_scenario();
  const double theta = np_threshold(s, 0.1);
  const std::uint64_t trials = 100000;
  std::uint64_t alarms = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    sim::TrialStream stream(99, 0, t);
    if (sim::draw_energy(stream, s, 0, sim::SamplingMode::DirectGamma) > theta) ++alarms;
  }
  const double rate = static_cast<double>(alarms) / trials;
  EXPECT_NEAR(rate, 0.1, 3.0 * std::sqrt(0.1 * 0.9 / trials));
}

TEST(NpThreshold, WithOnOffRegionsKeepsPairwiseSplits) {
  const Scenario s = default_scenario();
  const double theta = np_threshold(s, 0.05);
  const DecisionRegions r = build_regions_with_onoff(s, theta);
  EXPECT_DOUBLE_EQ(r.onoff_threshold(), theta);
  EXPECT_NEAR(1.0 - gammafn::reg_lower_gamma(s.samples(), theta / s.noise_var()), 0.05, 1e-10);
}

}  // namespace
