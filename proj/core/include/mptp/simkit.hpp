#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "mptp/fusion.hpp"
#include "mptp/metrics.hpp"
#include "mptp/regions.hpp"
#include "mptp/scenario.hpp"

namespace mptp::sim {

enum class SamplingMode {
  PerSample,    // Σ_{l=1}^M |x_l|^2 with x_l ~ CN(0, s_i)
  DirectGamma,  // y ~ Gamma(M, s_i)
};

struct TrialPlan {
  std::uint64_t trials_per_hypothesis = 100'000;
  std::uint64_t seed = 0x5EED;
  SamplingMode mode = SamplingMode::DirectGamma;
};

// Counter-based random stream: the sequence is a pure function of
// (seed, hypothesis, trial), so results do not depend on how trials are
// scheduled across threads. SplitMix64 underneath.
class TrialStream {
 public:
  using result_type = std::uint64_t;

  TrialStream(std::uint64_t seed, std::uint64_t hypothesis, std::uint64_t trial);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  double uniform();  // [0, 1)
  double normal();   // N(0, 1), Marsaglia polar method
  double gamma(double shape, double scale);  // Marsaglia-Tsang, shape >= 1

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

double draw_energy(TrialStream& stream, const Scenario& s, HypothesisIndex i,
                   SamplingMode mode);

// Raw decision counts, counts[i * levels + j], each row summing to `trials`.
struct CountMatrix {
  std::size_t levels = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(HypothesisIndex i, HypothesisIndex j) const { return counts[i * levels + j]; }
  DecisionMatrix to_matrix() const;
  bool operator==(const CountMatrix&) const = default;
};

// workers = 0 selects std::thread::hardware_concurrency().
CountMatrix empirical_counts(const TrialPlan& plan, const Scenario& s,
                             const DecisionRegions& r, unsigned workers = 0);
DecisionMatrix empirical_matrix(const TrialPlan& plan, const Scenario& s,
                                const DecisionRegions& r, unsigned workers = 0);

// Simulates `rule.users()` SUs per trial, each sensing independently with
// regions `r`, and fuses their votes with `rule`.
CountMatrix empirical_fusion_counts(const TrialPlan& plan, const Scenario& s,
                                    const DecisionRegions& r, const fusion::FusionRule& rule,
                                    unsigned workers = 0);

}  // namespace mptp::sim
