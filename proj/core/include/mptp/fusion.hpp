#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mptp/metrics.hpp"
#include "mptp/scenario.hpp"

namespace mptp::fusion {

// d_0..d_N: number of SUs voting for each hypothesis; Σ d_n = K.
using VoteVector = std::vector<int>;
// j_1..j_K: the index reported by each SU.
using VoteOutcome = std::vector<HypothesisIndex>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;
inline constexpr std::uint64_t kHeteroOutcomeCap = 500'000;
inline constexpr int kHeteroMaxUsers = 12;

// C(K + N, N), saturating at UINT64_MAX.
std::uint64_t vote_vector_count(int users, int power_levels);

// All compositions of K into N + 1 ordered parts, lexicographically
// ascending. Throws ResourceLimit when the count exceeds `cap`.
std::vector<VoteVector> enumerate_votes(int users, int power_levels,
                                        std::uint64_t cap = kDefaultEnumerationCap);

// Position of `d` in enumerate_votes(Σ d, d.size() - 1).
std::size_t vote_rank(const VoteVector& d);

VoteVector tally(const VoteOutcome& outcome, std::size_t levels);

// Multinomial Pr(d | H_i) for K SUs sharing one local decision matrix.
double vote_prob(const VoteVector& d, const DecisionMatrix& local, int users,
                 HypothesisIndex i);
double log_vote_prob(const VoteVector& d, const DecisionMatrix& local, int users,
                     HypothesisIndex i);

// Pr(d | H_i) = Σ_{b: tally(b) = d} Π_k locals[k][i][b_k] for heterogeneous SUs.
double vote_prob_hetero(const VoteVector& d, const std::vector<DecisionMatrix>& locals,
                        HypothesisIndex i);

// d_0 > K/2 claims absence; otherwise the most-voted nonzero level, ties to
// the largest index.
HypothesisIndex majority_decide(const VoteVector& d);

// On/off MAP gate over vote likelihoods, then argmax_{i>=1} Pr(d|H_i)π_i.
HypothesisIndex optimal_decide(const VoteVector& d, const Scenario& s,
                               const DecisionMatrix& local);

enum class RuleKind { Majority, OptimalMap };

// Precomputed map from every vote vector (by vote_rank) to a fused decision.
class FusionRule {
 public:
  static FusionRule majority(int users, int power_levels,
                             std::uint64_t cap = kDefaultEnumerationCap);
  static FusionRule optimal(const Scenario& s, const DecisionMatrix& local, int users,
                            std::uint64_t cap = kDefaultEnumerationCap);

  RuleKind kind() const noexcept { return kind_; }
  int users() const noexcept { return users_; }
  std::size_t levels() const noexcept { return levels_; }
  const std::vector<VoteVector>& votes() const noexcept { return votes_; }
  const std::vector<HypothesisIndex>& decisions() const noexcept { return decisions_; }
  HypothesisIndex decide(const VoteVector& d) const { return decisions_.at(vote_rank(d)); }

 private:
  FusionRule(RuleKind kind, int users, std::size_t levels, std::vector<VoteVector> votes,
             std::vector<HypothesisIndex> decisions);

  RuleKind kind_;
  int users_;
  std::size_t levels_;
  std::vector<VoteVector> votes_;
  std::vector<HypothesisIndex> decisions_;
};

// Pr_fused(H_j | H_i) = Σ_{d : rule(d) = j} Pr(d | H_i).
DecisionMatrix fused_matrix(const FusionRule& rule, const DecisionMatrix& local);

DecisionMatrix majority_matrix(const DecisionMatrix& local, int users,
                               std::uint64_t cap = kDefaultEnumerationCap);

// The nested-sum closed form for majority fusion with floor/ceiling limits and
// the α_n / β_n inner bounds, evaluated term by term.
DecisionMatrix majority_matrix_closed(const DecisionMatrix& local, int users,
                                      std::uint64_t cap = kDefaultEnumerationCap);

DecisionMatrix optimal_matrix(const Scenario& s, const DecisionMatrix& local, int users,
                              std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace mptp::fusion
