#include "mptp/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "mptp/errors.hpp"

namespace mptp::sim {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

unsigned resolve_workers(unsigned workers, std::uint64_t trials) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(trials, 1)));
}

// Runs body(hypothesis, trial, local_counts) over every trial, splitting the
// trial range into contiguous blocks per worker. Counts are summed at the end,
// so the result is independent of the worker count.
CountMatrix run_trials(std::size_t levels, std::uint64_t trials, unsigned workers,
                       const std::function<HypothesisIndex(HypothesisIndex, std::uint64_t)>& body) {
  if (trials < 1) throw InvalidParameter("trials", "need at least one trial per hypothesis");
  workers = resolve_workers(workers, trials);
  std::vector<std::vector<std::uint64_t>> partial(workers,
                                                  std::vector<std::uint64_t>(levels * levels, 0));
  auto work = [&](unsigned w) {
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    auto& counts = partial[w];
    for (HypothesisIndex i = 0; i < levels; ++i) {
      for (std::uint64_t t = begin; t < end; ++t) ++counts[i * levels + body(i, t)];
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  CountMatrix out{levels, trials, std::vector<std::uint64_t>(levels * levels, 0)};
  for (const auto& p : partial) {
    for (std::size_t k = 0; k < p.size(); ++k) out.counts[k] += p[k];
  }
  return out;
}

}  // namespace

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t hypothesis, std::uint64_t trial)
    : state_(mix64(mix64(mix64(seed) + kGolden * (hypothesis + 1)) + kGolden * (trial + 1))) {}

TrialStream::result_type TrialStream::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

double TrialStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double TrialStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double r2 = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    r2 = u * u + v * v;
  } while (r2 >= 1.0 || r2 == 0.0);
  const double f = std::sqrt(-2.0 * std::log(r2) / r2);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double TrialStream::gamma(double shape, double scale) {
  if (!(shape >= 1.0)) throw DomainError("TrialStream::gamma: shape must be >= 1");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

double draw_energy(TrialStream& stream, const Scenario& s, HypothesisIndex i,
                   SamplingMode mode) {
  const double scale = s.energy_scale(i);
  if (mode == SamplingMode::DirectGamma) return stream.gamma(s.samples(), scale);
  // Each complex sample has independent real and imaginary parts of
  // variance s_i / 2.
  const double sd = std::sqrt(0.5 * scale);
  double y = 0.0;
  for (int l = 0; l < s.samples(); ++l) {
    const double re = sd * stream.normal();
    const double im = sd * stream.normal();
    y += re * re + im * im;
  }
  return y;
}

DecisionMatrix CountMatrix::to_matrix() const {
  std::vector<std::vector<double>> rows(levels, std::vector<double>(levels, 0.0));
  const double inv = 1.0 / static_cast<double>(trials);
  for (std::size_t i = 0; i < levels; ++i) {
    for (std::size_t j = 0; j < levels; ++j) rows[i][j] = static_cast<double>(at(i, j)) * inv;
  }
  return DecisionMatrix::from_rows(rows, Provenance::Empirical, trials);
}

CountMatrix empirical_counts(const TrialPlan& plan, const Scenario& s,
                             const DecisionRegions& r, unsigned workers) {
  if (r.num_levels() != s.num_levels()) {
    throw InvalidParameter("regions", "regions were built for a different scenario");
  }
  return run_trials(s.num_levels(), plan.trials_per_hypothesis, workers,
                    [&](HypothesisIndex i, std::uint64_t t) {
                      TrialStream stream(plan.seed, i, t);
                      return classify(draw_energy(stream, s, i, plan.mode), r);
                    });
}

DecisionMatrix empirical_matrix(const TrialPlan& plan, const Scenario& s,
                                const DecisionRegions& r, unsigned workers) {
  return empirical_counts(plan, s, r, workers).to_matrix();
}

CountMatrix empirical_fusion_counts(const TrialPlan& plan, const Scenario& s,
                                    const DecisionRegions& r, const fusion::FusionRule& rule,
                                    unsigned workers) {
  const std::size_t levels = s.num_levels();
  if (rule.levels() != levels || r.num_levels() != levels) {
    throw InvalidParameter("rule", "fusion rule, regions and scenario sizes differ");
  }
  return run_trials(levels, plan.trials_per_hypothesis, workers,
                    [&](HypothesisIndex i, std::uint64_t t) {
                      TrialStream stream(plan.seed, i, t);
                      fusion::VoteVector d(levels, 0);
                      for (int k = 0; k < rule.users(); ++k) {
                        ++d[classify(draw_energy(stream, s, i, plan.mode), r)];
                      }
                      return rule.decide(d);
                    });
}

}  // namespace mptp::sim
