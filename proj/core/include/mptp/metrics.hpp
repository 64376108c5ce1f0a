#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mptp/regions.hpp"
#include "mptp/scenario.hpp"

namespace mptp {

enum class Provenance { Analytic, Empirical };

// Row-stochastic matrix of decision probabilities: at(i, j) = Pr(decide H_j | H_i).
class DecisionMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  // rows[i][j]; validates shape, entry range and row sums.
  static DecisionMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                  Provenance provenance = Provenance::Analytic,
                                  std::uint64_t trials = 0);
  static DecisionMatrix identity(std::size_t levels);

  std::size_t size() const noexcept { return levels_; }
  double at(HypothesisIndex i, HypothesisIndex j) const { return entries_[i * levels_ + j]; }
  std::vector<double> row(HypothesisIndex i) const;

  Provenance provenance() const noexcept { return provenance_; }
  // Trials per true hypothesis (empirical matrices only; 0 otherwise).
  std::uint64_t trials() const noexcept { return trials_; }

 private:
  DecisionMatrix(std::size_t levels, std::vector<double> entries, Provenance provenance,
                 std::uint64_t trials);

  std::size_t levels_;
  std::vector<double> entries_;
  Provenance provenance_;
  std::uint64_t trials_;
};

// c[i][j]: cost of deciding H_j when H_i is true. Entries finite and >= 0.
class CostMatrix {
 public:
  explicit CostMatrix(std::vector<std::vector<double>> costs);
  static CostMatrix zero_one(std::size_t levels);

  std::size_t size() const noexcept { return costs_.size(); }
  double at(HypothesisIndex i, HypothesisIndex j) const { return costs_[i][j]; }
  const std::vector<std::vector<double>>& rows() const noexcept { return costs_; }

  bool operator==(const CostMatrix&) const = default;

 private:
  std::vector<std::vector<double>> costs_;
};

// Pr(H_j | H_i) = P(M, t_{j+1}/s_i) - P(M, t_j/s_i).
DecisionMatrix decision_matrix(const Scenario& s, const DecisionRegions& r);

struct DetectionPair {
  double p_fa;
  double p_d;
};

DetectionPair pfa_pd(const DecisionMatrix& q, const Scenario& s);

enum class Discrimination {
  Dis1,  // (1/π_on) Σ_{i>=1} q[i][i] π_i
  Dis2,  // Σ_{i>=0} q[i][i] π_i
};

double discrimination(const DecisionMatrix& q, const Scenario& s, Discrimination variant);

// Σ_{|i-j| = delta} q[i][j] π_i
double offset_error(const DecisionMatrix& q, const Scenario& s, std::size_t delta);

// argmin_j Σ_i c[i][j] Pr(H_i | y); ties go to the larger index.
HypothesisIndex bayes_risk_decide(double y, const Scenario& s, const CostMatrix& c);

}  // namespace mptp
