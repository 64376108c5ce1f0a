#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include <mptp/errors.hpp>
#include <mptp/fusion.hpp>
#include <mptp/gammafn.hpp>
#include <mptp/metrics.hpp>
#include <mptp/regions.hpp>
#include <mptp/scenario.hpp>
#include <mptp/simkit.hpp>

namespace {

using namespace mptp;
using sim::SamplingMode;
using sim::TrialStream;

Scenario default_scenario() { return make_scenario(ScenarioParams{}); }

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

TEST(TrialStream, PureFunctionOfCoordinates) {
  TrialStream a(7, 2, 1234), b(7, 2, 1234), c(7, 2, 1235), d(7, 3, 1234);
  for (int k = 0; k < 16; ++k) {
    const auto va = a();
    EXPECT_EQ(va, b());
    EXPECT_NE(va, c());
    EXPECT_NE(va, d());
  }
}

TEST(TrialStream, UniformMoments) {
  TrialStream s(1, 0, 0);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 2e-3);
}

TEST(TrialStream, NormalAndGammaMoments) {
  TrialStream s(2, 0, 0);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 4.0 * std::sqrt(2.0 / n));

  const double shape = 7.5, scale = 2.0;
  sum = sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double g = s.gamma(shape, scale);
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, shape * scale, 4.0 * std::sqrt(shape * scale * scale / n));
  EXPECT_NEAR(sq / n - mean * mean, shape * scale * scale, 0.02 * shape * scale * scale);
  EXPECT_THROW(s.gamma(0.5, 1.0), DomainError);
}

// Counts of gamma draws in ten equiprobable bins pass a chi-square test.
TEST(TrialStream, GammaChiSquare) {
  const double shape = 1000.0;
  std::vector<double> edges;
  for (int k = 1; k < 10; ++k) edges.push_back(gammafn::inv_reg_lower_gamma(shape, k / 10.0));
  std::vector<int> bins(10, 0);
  const int n = 50000;
  for (int t = 0; t < n; ++t) {
    TrialStream s(3, 0, t);
    const double g = s.gamma(shape, 1.0);
    ++bins[std::upper_bound(edges.begin(), edges.end(), g) - edges.begin()];
  }
  double chi2 = 0.0;
  for (int c : bins) chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
  EXPECT_LT(chi2, 27.88);  // 9 degrees of freedom, α = 0.001
}

TEST(DrawEnergy, SamplingModesAgreeInDistribution) {
  const Scenario s = default_scenario();
  const int n = 10000;
  for (HypothesisIndex i : {HypothesisIndex{0}, HypothesisIndex{4}}) {
    std::vector<double> direct, per_sample;
    for (int t = 0; t < n; ++t) {
      TrialStream a(11, i, t), b(12, i, t);
      direct.push_back(sim::draw_energy(a, s, i, SamplingMode::DirectGamma));
      per_sample.push_back(sim::draw_energy(b, s, i, SamplingMode::PerSample));
    }
    const double critical = 1.949 * std::sqrt(2.0 / n);  // α = 0.001
    EXPECT_LT(ks_statistic(direct, per_sample), critical) << "level " << i;
  }
}

TEST(EmpiricalMatrix, SingleTrialRowsAreOneHot) {
  const Scenario s = default_scenario();
  const DecisionRegions r = build_regions(s, Strategy::I);
  const DecisionMatrix q = sim::empirical_matrix({1, 5, SamplingMode::DirectGamma}, s, r);
  EXPECT_EQ(q.provenance(), Provenance::Empirical);
  EXPECT_EQ(q.trials(), 1u);
  for (HypothesisIndex i = 0; i < q.size(); ++i) {
    const auto row = q.row(i);
    EXPECT_EQ(std::count(row.begin(), row.end(), 1.0), 1);
    EXPECT_EQ(std::count(row.begin(), row.end(), 0.0), 4);
  }
}

TEST(EmpiricalMatrix, MatchesAnalytic) {
  const Scenario s = default_scenario();
  const DecisionRegions r = build_regions(s, Strategy::I);
  const std::uint64_t t = 200000;
  const DecisionMatrix emp = sim::empirical_matrix({t, 0x5EED, SamplingMode::DirectGamma}, s, r);
  const DecisionMatrix ana = decision_matrix(s, r);
  for (HypothesisIndex i = 0; i < ana.size(); ++i) {
    for (HypothesisIndex j = 0; j < ana.size(); ++j) {
      const double q = ana.at(i, j);
      EXPECT_NEAR(emp.at(i, j), q, 4.0 * std::sqrt(q * (1.0 - q) / t) + 1e-12)
          << "i=" << i << " j=" << j;
    }
  }
}

TEST(EmpiricalMatrix, PerSampleModeMatchesAnalytic) {
  const Scenario s = default_scenario().with_samples(200);
  const DecisionRegions r = build_regions(s, Strategy::II);
  const std::uint64_t t = 20000;
  const DecisionMatrix emp = sim::empirical_matrix({t, 9, SamplingMode::PerSample}, s, r);
  const DecisionMatrix ana = decision_matrix(s, r);
  for (HypothesisIndex i = 0; i < ana.size(); ++i) {
    for (HypothesisIndex j = 0; j < ana.size(); ++j) {
      const double q = ana.at(i, j);
      EXPECT_NEAR(emp.at(i, j), q, 4.0 * std::sqrt(q * (1.0 - q) / t) + 1e-12);
    }
  }
}

TEST(EmpiricalCounts, IndependentOfWorkerCount) {
  const Scenario s = default_scenario();
  const DecisionRegions r = build_regions(s, Strategy::I);
  const sim::TrialPlan plan{30001, 77, SamplingMode::DirectGamma};
  const auto one = sim::empirical_counts(plan, s, r, 1);
  EXPECT_EQ(one, sim::empirical_counts(plan, s, r, 3));
  EXPECT_EQ(one, sim::empirical_counts(plan, s, r, 8));
  EXPECT_NE(one, sim::empirical_counts({30001, 78, SamplingMode::DirectGamma}, s, r, 1));
}

TEST(EmpiricalCounts, RejectsZeroTrials) {
  const Scenario s = default_scenario();
  const DecisionRegions r = build_regions(s, Strategy::I);
  EXPECT_THROW(sim::empirical_counts({0, 1, SamplingMode::DirectGamma}, s, r), InvalidParameter);
}

TEST(EmpiricalFusion, MajorityMatchesAnalytic) {
  const Scenario s = default_scenario();
  const DecisionRegions r = build_regions(s, Strategy::I);
  const DecisionMatrix local = decision_matrix(s, r);
  const auto rule = fusion::FusionRule::majority(5, 4);
  const DecisionMatrix ana = fusion::fused_matrix(rule, local);
  const std::uint64_t t = 50000;
  const sim::CountMatrix counts =
      sim::empirical_fusion_counts({t, 4, SamplingMode::DirectGamma}, s, r, rule);
  const DecisionMatrix emp = counts.to_matrix();
  for (HypothesisIndex i = 0; i < ana.size(); ++i) {
    for (HypothesisIndex j = 0; j < ana.size(); ++j) {
      const double q = ana.at(i, j);
      EXPECT_NEAR(emp.at(i, j), q, 4.0 * std::sqrt(q * (1.0 - q) / t) + 1e-12)
          << "i=" << i << " j=" << j;
    }
  }
}

}  // namespace
