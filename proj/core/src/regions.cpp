#include "mptp/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "mptp/errors.hpp"
#include "mptp/gammafn.hpp"
#include "mptp/numeric.hpp"

namespace mptp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Log-joint with the hypothesis-independent terms dropped: a line in y with
// slope -1/s_i.
double line_value(HypothesisIndex i, double y, const Scenario& s) {
  return s.log_prior(i) - s.samples() * s.log_energy_scale(i) - y / s.energy_scale(i);
}

// ln of the i-th term of Φ(θ) + π_0.
double onoff_log_term(HypothesisIndex i, double theta, const Scenario& s) {
  const double snr = s.gain() * s.power(i) / s.noise_var();
  return s.log_prior(i) - s.samples() * std::log1p(snr) +
         theta * s.gain() * s.power(i) / (s.noise_var() * s.energy_scale(i));
}

double onoff_log_sum(double theta, const Scenario& s) {
  std::vector<double> terms;
  terms.reserve(s.num_power_levels());
  for (HypothesisIndex i = 1; i < s.num_levels(); ++i) {
    terms.push_back(onoff_log_term(i, theta, s));
  }
  return log_sum_exp(terms);
}

// Walks the upper envelope of lines first..N on [start, inf). Returns the
// lower boundary per level (NaN for levels that never win).
std::vector<double> envelope_walk(const Scenario& s, HypothesisIndex first, double start) {
  const HypothesisIndex last = s.num_power_levels();
  std::vector<double> lower(s.num_levels(), std::numeric_limits<double>::quiet_NaN());

  HypothesisIndex current = first;
  double best = line_value(first, start, s);
  for (HypothesisIndex k = first + 1; k <= last; ++k) {
    const double v = line_value(k, start, s);
    if (v >= best) {
      best = v;
      current = k;
    }
  }
  lower[current] = start;
  double y = start;
  while (current < last) {
    double next_y = kInf;
    HypothesisIndex next = last;
    for (HypothesisIndex k = current + 1; k <= last; ++k) {
      const double crossing = std::max(theta_pair(current, k, s), y);
      if (crossing <= next_y) {
        next_y = crossing;
        next = k;
      }
    }
    lower[next] = next_y;
    current = next;
    y = next_y;
  }
  return lower;
}

DecisionRegions regions_from_walk(const std::vector<double>& lower, Strategy strategy,
                                  double onoff) {
  const std::size_t levels = lower.size();
  std::vector<double> t(levels + 1);
  t[0] = 0.0;
  t[levels] = kInf;
  for (std::size_t i = levels - 1; i >= 1; --i) {
    t[i] = std::isnan(lower[i]) ? t[i + 1] : lower[i];
  }
  return DecisionRegions(strategy, std::move(t), onoff);
}

double pairwise_max_below(HypothesisIndex i, HypothesisIndex from, const Scenario& s) {
  double m = -kInf;
  for (HypothesisIndex j = from; j < i; ++j) m = std::max(m, theta_pair(i, j, s));
  return m;
}

double pairwise_min_above(HypothesisIndex i, const Scenario& s) {
  double m = kInf;
  for (HypothesisIndex j = i + 1; j < s.num_levels(); ++j) {
    m = std::min(m, theta_pair(i, j, s));
  }
  return m;
}

bool width_negligible(double lo, double hi, double rel_tol) {
  if (!(hi > lo)) return true;
  return relatively_close(lo, hi, rel_tol);
}

}  // namespace

const char* to_string(Strategy strategy) {
  return strategy == Strategy::I ? "1" : "2";
}

DecisionRegions::DecisionRegions(Strategy strategy, std::vector<double> thresholds,
                                 double onoff_threshold)
    : strategy_(strategy),
      thresholds_(std::move(thresholds)),
      onoff_threshold_(onoff_threshold) {
  if (thresholds_.size() < 3) {
    throw ConsistencyError("DecisionRegions: need at least two levels");
  }
  if (thresholds_.front() != 0.0 || thresholds_.back() != kInf) {
    throw ConsistencyError("DecisionRegions: thresholds must run from 0 to +inf");
  }
  for (std::size_t i = 1; i < thresholds_.size(); ++i) {
    if (!(thresholds_[i] >= thresholds_[i - 1])) {
      throw ConsistencyError("DecisionRegions: thresholds must be nondecreasing");
    }
  }
  if (is_masked(0) || is_masked(num_levels() - 1)) {
    throw ConsistencyError("DecisionRegions: levels 0 and N cannot be masked");
  }
  if (!(onoff_threshold_ > 0.0) || onoff_threshold_ != thresholds_[1]) {
    throw ConsistencyError("DecisionRegions: on/off threshold must equal t_1 > 0");
  }
}

std::vector<HypothesisIndex> DecisionRegions::masked() const {
  std::vector<HypothesisIndex> out;
  for (HypothesisIndex i = 0; i < num_levels(); ++i) {
    if (is_masked(i)) out.push_back(i);
  }
  return out;
}

double theta_pair(HypothesisIndex i, HypothesisIndex j, const Scenario& s) {
  if (i == j) throw DomainError("theta_pair: requires i != j");
  const double diff = s.gain() * (s.power(i) - s.power(j));
  const double log_ratio = std::log1p(diff / s.energy_scale(j));  // ln(s_i / s_j)
  return s.energy_scale(i) * s.energy_scale(j) / diff *
         (s.samples() * log_ratio + s.log_prior(j) - s.log_prior(i));
}

double onoff_objective(double theta, const Scenario& s) {
  return s.prior(0) * std::expm1(onoff_log_sum(theta, s) - s.log_prior(0));
}

double solve_theta_onoff(const Scenario& s) {
  const double log_off = s.log_prior(0);
  auto positive = [&](double theta) { return onoff_log_sum(theta, s) >= log_off; };
  if (positive(0.0)) {
    throw DegenerateThreshold(
        "on/off threshold is degenerate: Φ(0) >= 0, presence would always be claimed");
  }
  double lo = 0.0;
  double hi = s.noise_var() * s.samples();
  while (!positive(hi)) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw ConvergenceError("solve_theta_onoff: no bracket");
  }
  for (int iter = 0; iter < 4096; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (positive(mid) ? hi : lo) = mid;
  }
  return std::abs(onoff_objective(lo, s)) <= std::abs(onoff_objective(hi, s)) ? lo : hi;
}

double phi_onoff(const Scenario& s) {
  const DecisionRegions r = envelope_regions(s, Strategy::II);
  HypothesisIndex j0 = 1;
  while (r.is_masked(j0)) ++j0;
  const double snr = s.gain() * s.power(j0) / s.noise_var();
  return s.noise_var() * s.energy_scale(j0) / (s.gain() * s.power(j0)) *
         (s.log_prior(0) - s.log_prior(j0) + s.samples() * std::log1p(snr));
}

DecisionRegions envelope_regions(const Scenario& s, Strategy strategy) {
  if (strategy == Strategy::I) {
    return envelope_regions_with_onoff(s, solve_theta_onoff(s));
  }
  std::vector<double> lower = envelope_walk(s, 0, 0.0);
  if (std::isnan(lower[0])) {
    throw DegenerateThreshold(
        "strategy II: H_0 never wins the MAP comparison, absence is never claimed");
  }
  HypothesisIndex j0 = 1;
  while (std::isnan(lower[j0])) ++j0;
  if (!(lower[j0] > 0.0)) {
    throw DegenerateThreshold("strategy II: on/off threshold collapses to zero");
  }
  return regions_from_walk(lower, Strategy::II, lower[j0]);
}

DecisionRegions envelope_regions_with_onoff(const Scenario& s, double onoff_threshold) {
  if (!(onoff_threshold > 0.0) || !std::isfinite(onoff_threshold)) {
    throw DegenerateThreshold("strategy I: on/off threshold must be finite and positive");
  }
  std::vector<double> lower = envelope_walk(s, 1, onoff_threshold);
  lower[0] = 0.0;
  return regions_from_walk(lower, Strategy::I, onoff_threshold);
}

PairwiseBounds pairwise_bounds_with_onoff(const Scenario& s, double onoff_threshold) {
  const std::size_t levels = s.num_levels();
  PairwiseBounds b{std::vector<double>(levels), std::vector<double>(levels),
                   std::vector<bool>(levels)};
  b.lower[0] = 0.0;
  b.upper[0] = onoff_threshold;
  b.masked[0] = false;
  for (HypothesisIndex i = 1; i < levels; ++i) {
    b.lower[i] = std::max(onoff_threshold, pairwise_max_below(i, 1, s));
    b.upper[i] = pairwise_min_above(i, s);
    b.masked[i] = !(b.lower[i] < b.upper[i]);
  }
  return b;
}

PairwiseBounds pairwise_bounds(const Scenario& s, Strategy strategy) {
  if (strategy == Strategy::I) return pairwise_bounds_with_onoff(s, solve_theta_onoff(s));
  const std::size_t levels = s.num_levels();
  PairwiseBounds b{std::vector<double>(levels), std::vector<double>(levels),
                   std::vector<bool>(levels)};
  for (HypothesisIndex i = 0; i < levels; ++i) {
    b.lower[i] = i == 0 ? 0.0 : pairwise_max_below(i, 0, s);
    b.upper[i] = pairwise_min_above(i, s);
    b.masked[i] = !(b.lower[i] < b.upper[i]);
  }
  if (b.masked[0] || !(b.upper[0] > 0.0)) {
    throw DegenerateThreshold("strategy II: on/off threshold collapses to zero");
  }
  return b;
}

DecisionRegions regions_from_bounds(const PairwiseBounds& bounds, Strategy strategy,
                                    double onoff_threshold) {
  std::vector<double> lower = bounds.lower;
  for (std::size_t i = 1; i < lower.size(); ++i) {
    if (bounds.masked[i]) lower[i] = std::numeric_limits<double>::quiet_NaN();
  }
  return regions_from_walk(lower, strategy, onoff_threshold);
}

std::string compare_regions(const DecisionRegions& envelope, const PairwiseBounds& bounds,
                            double rel_tol) {
  std::ostringstream err;
  err.precision(17);
  for (HypothesisIndex i = 0; i < envelope.num_levels(); ++i) {
    const bool env_masked = envelope.is_masked(i);
    if (env_masked != bounds.masked[i]) {
      // A region that only touches at a point is masked in one construction
      // and zero-width-but-unmasked in the other.
      const bool touching = env_masked
                                ? width_negligible(bounds.lower[i], bounds.upper[i], rel_tol)
                                : width_negligible(envelope.lower(i), envelope.upper(i), rel_tol);
      if (touching) continue;
      err << "level " << i << ": envelope masked=" << env_masked
          << " pairwise masked=" << bounds.masked[i];
      return err.str();
    }
    if (env_masked) continue;
    if (!relatively_close(envelope.lower(i), bounds.lower[i], rel_tol) ||
        !relatively_close(envelope.upper(i), bounds.upper[i], rel_tol)) {
      err << "level " << i << ": envelope [" << envelope.lower(i) << ", "
          << envelope.upper(i) << ") vs pairwise [" << bounds.lower[i] << ", "
          << bounds.upper[i] << ")";
      return err.str();
    }
  }
  return {};
}

DecisionRegions build_regions(const Scenario& s, Strategy strategy) {
  const DecisionRegions env = envelope_regions(s, strategy);
  const PairwiseBounds bounds = strategy == Strategy::I
                                    ? pairwise_bounds_with_onoff(s, env.onoff_threshold())
                                    : pairwise_bounds(s, strategy);
  if (const std::string msg = compare_regions(env, bounds); !msg.empty()) {
    throw ConsistencyError("envelope and pairwise regions disagree: " + msg);
  }
  return env;
}

DecisionRegions build_regions_with_onoff(const Scenario& s, double onoff_threshold) {
  const DecisionRegions env = envelope_regions_with_onoff(s, onoff_threshold);
  const PairwiseBounds bounds = pairwise_bounds_with_onoff(s, onoff_threshold);
  if (const std::string msg = compare_regions(env, bounds); !msg.empty()) {
    throw ConsistencyError("envelope and pairwise regions disagree: " + msg);
  }
  return env;
}

bool has_mutual_masking(const Scenario& s, const DecisionRegions& r) {
  for (HypothesisIndex i = 1; i + 1 < r.num_levels(); ++i) {
    if (!r.is_masked(i)) continue;
    const double from_nonzero = pairwise_max_below(i, 1, s);
    const double from_off =
        r.strategy() == Strategy::I ? r.onoff_threshold() : theta_pair(i, 0, s);
    if (from_nonzero >= from_off) return true;
  }
  return false;
}

HypothesisIndex classify(double y, const DecisionRegions& r) {
  const auto& t = r.thresholds();
  const auto it = std::upper_bound(t.begin(), t.end() - 1, y);
  const auto idx = static_cast<HypothesisIndex>(it - t.begin());
  return idx == 0 ? 0 : idx - 1;
}

double np_threshold(const Scenario& s, double target_pfa) {
  if (!(target_pfa > 0.0 && target_pfa <= 1.0)) {
    throw DomainError("np_threshold: target P_fa must lie in (0, 1]");
  }
  return s.noise_var() * gammafn::inv_reg_lower_gamma(s.samples(), 1.0 - target_pfa);
}

}  // namespace mptp
