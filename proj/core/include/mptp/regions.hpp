#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mptp/scenario.hpp"

namespace mptp {

// I: decide on/off first (MAP over H_0 vs H_on), then MAP among 1..N.
// II: MAP over all of 0..N at once.
enum class Strategy { I, II };

const char* to_string(Strategy strategy);

// Ordered energy thresholds t_0 = 0 <= t_1 <= ... <= t_N <= t_{N+1} = +inf.
// Level i is decided on [t_i, t_{i+1}); a masked level has t_i == t_{i+1}.
class DecisionRegions {
 public:
  // Validates every invariant; throws ConsistencyError on violation.
  DecisionRegions(Strategy strategy, std::vector<double> thresholds, double onoff_threshold);

  Strategy strategy() const noexcept { return strategy_; }
  std::size_t num_levels() const noexcept { return thresholds_.size() - 1; }
  const std::vector<double>& thresholds() const noexcept { return thresholds_; }
  double lower(HypothesisIndex i) const { return thresholds_.at(i); }
  double upper(HypothesisIndex i) const { return thresholds_.at(i + 1); }
  bool is_masked(HypothesisIndex i) const { return lower(i) == upper(i); }
  std::vector<HypothesisIndex> masked() const;
  std::size_t masked_count() const { return masked().size(); }

  // θ_on/off for strategy I, φ_on/off for strategy II.
  double onoff_threshold() const noexcept { return onoff_threshold_; }

 private:
  Strategy strategy_;
  std::vector<double> thresholds_;
  double onoff_threshold_;
};

// Θ(i, j): energy at which p(y|H_i)π_i = p(y|H_j)π_j. Symmetric in (i, j).
double theta_pair(HypothesisIndex i, HypothesisIndex j, const Scenario& s);

// Φ(θ) = Σ_{i>=1} π_i (1 + γP_i/σ²)^{-M} exp(γP_i θ / (σ² s_i)) - π_0,
// evaluated through log-sum-exp.
double onoff_objective(double theta, const Scenario& s);

// Unique root of Φ. Throws DegenerateThreshold when Φ(0) >= 0.
double solve_theta_onoff(const Scenario& s);

// Upper boundary of H_0 under strategy II, from the closed form with j_0 the
// first unmasked nonzero level.
double phi_onoff(const Scenario& s);

// Per-level bounds from the pairwise thresholds (max of lower crossings,
// min of upper crossings, clipped by the on/off threshold for strategy I).
struct PairwiseBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> masked;
};

// Decision regions from the upper envelope of the log-joint lines.
DecisionRegions envelope_regions(const Scenario& s, Strategy strategy);
// Strategy I regions with a caller-supplied on/off threshold (for example a
// Neyman-Pearson threshold).
DecisionRegions envelope_regions_with_onoff(const Scenario& s, double onoff_threshold);

PairwiseBounds pairwise_bounds(const Scenario& s, Strategy strategy);
PairwiseBounds pairwise_bounds_with_onoff(const Scenario& s, double onoff_threshold);
DecisionRegions regions_from_bounds(const PairwiseBounds& bounds, Strategy strategy,
                                    double onoff_threshold);

// Envelope regions, cross-checked against the pairwise construction. Any
// threshold or mask disagreement beyond `rel_tol` throws ConsistencyError.
inline constexpr double kRegionAgreementTolerance = 1e-8;
DecisionRegions build_regions(const Scenario& s, Strategy strategy);
DecisionRegions build_regions_with_onoff(const Scenario& s, double onoff_threshold);

// Empty string when the two constructions agree, otherwise a description of
// the first disagreement.
std::string compare_regions(const DecisionRegions& envelope, const PairwiseBounds& bounds,
                            double rel_tol = kRegionAgreementTolerance);

// True if some masked level's binding lower bound comes from another nonzero
// level (as opposed to being swallowed by the H_0 region).
bool has_mutual_masking(const Scenario& s, const DecisionRegions& r);

// Index i with y in [t_i, t_{i+1}).
HypothesisIndex classify(double y, const DecisionRegions& r);

// θ with Pr(y > θ | H_0) = target_pfa.
double np_threshold(const Scenario& s, double target_pfa);

}  // namespace mptp
