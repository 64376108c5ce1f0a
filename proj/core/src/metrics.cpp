#include "mptp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mptp/errors.hpp"
#include "mptp/gammafn.hpp"

namespace mptp {
namespace {

void require_matching(const DecisionMatrix& q, const Scenario& s) {
  if (q.size() != s.num_levels()) {
    throw InvalidParameter("decision_matrix", "size does not match the scenario's levels");
  }
}

}  // namespace

DecisionMatrix::DecisionMatrix(std::size_t levels, std::vector<double> entries,
                               Provenance provenance, std::uint64_t trials)
    : levels_(levels), entries_(std::move(entries)), provenance_(provenance), trials_(trials) {}

DecisionMatrix DecisionMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                         Provenance provenance, std::uint64_t trials) {
  const std::size_t n = rows.size();
  if (n < 2) throw InvalidParameter("decision_matrix", "need at least two levels");
  std::vector<double> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InvalidParameter("decision_matrix", "matrix must be square");
    double sum = 0.0;
    for (double v : rows[i]) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidParameter("decision_matrix",
                               "entries must lie in [0, 1] (row " + std::to_string(i) + ")");
      }
      sum += v;
      entries.push_back(v);
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw InvalidParameter("decision_matrix",
                             "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
  return DecisionMatrix(n, std::move(entries), provenance, trials);
}

DecisionMatrix DecisionMatrix::identity(std::size_t levels) {
  std::vector<std::vector<double>> rows(levels, std::vector<double>(levels, 0.0));
  for (std::size_t i = 0; i < levels; ++i) rows[i][i] = 1.0;
  return from_rows(rows);
}

std::vector<double> DecisionMatrix::row(HypothesisIndex i) const {
  const auto first = entries_.begin() + static_cast<std::ptrdiff_t>(i * levels_);
  return {first, first + static_cast<std::ptrdiff_t>(levels_)};
}

CostMatrix::CostMatrix(std::vector<std::vector<double>> costs) : costs_(std::move(costs)) {
  const std::size_t n = costs_.size();
  if (n < 2) throw InvalidParameter("cost_matrix", "need at least two levels");
  for (const auto& row : costs_) {
    if (row.size() != n) throw InvalidParameter("cost_matrix", "matrix must be square");
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidParameter("cost_matrix", "costs must be finite and nonnegative");
      }
    }
  }
}

CostMatrix CostMatrix::zero_one(std::size_t levels) {
  std::vector<std::vector<double>> c(levels, std::vector<double>(levels, 1.0));
  for (std::size_t i = 0; i < levels; ++i) c[i][i] = 0.0;
  return CostMatrix(std::move(c));
}

DecisionMatrix decision_matrix(const Scenario& s, const DecisionRegions& r) {
  const std::size_t n = s.num_levels();
  if (r.num_levels() != n) {
    throw InvalidParameter("regions", "regions were built for a different scenario");
  }
  const double m = s.samples();
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  std::vector<double> cdf(n + 1);
  for (HypothesisIndex i = 0; i < n; ++i) {
    const double scale = s.energy_scale(i);
    for (std::size_t k = 0; k <= n; ++k) {
      cdf[k] = gammafn::reg_lower_gamma(m, r.thresholds()[k] / scale);
    }
    for (HypothesisIndex j = 0; j < n; ++j) {
      rows[i][j] = r.is_masked(j) ? 0.0 : std::max(0.0, cdf[j + 1] - cdf[j]);
    }
  }
  return DecisionMatrix::from_rows(rows, Provenance::Analytic);
}

DetectionPair pfa_pd(const DecisionMatrix& q, const Scenario& s) {
  require_matching(q, s);
  const double prior_on = s.prior_on();
  if (!(prior_on > 0.0)) throw DomainError("pfa_pd: Pr(H_on) = 0");
  const std::size_t n = q.size();
  double p_fa = 0.0;
  for (HypothesisIndex j = 1; j < n; ++j) p_fa += q.at(0, j);
  double p_d = 0.0;
  for (HypothesisIndex i = 1; i < n; ++i) {
    double on = 0.0;
    for (HypothesisIndex j = 1; j < n; ++j) on += q.at(i, j);
    p_d += s.prior(i) * on;
  }
  return {p_fa, p_d / prior_on};
}

double discrimination(const DecisionMatrix& q, const Scenario& s, Discrimination variant) {
  require_matching(q, s);
  double trace = 0.0;
  const HypothesisIndex first = variant == Discrimination::Dis1 ? 1 : 0;
  for (HypothesisIndex i = first; i < q.size(); ++i) trace += q.at(i, i) * s.prior(i);
  if (variant == Discrimination::Dis2) return trace;
  if (!(s.prior_on() > 0.0)) throw DomainError("discrimination: Pr(H_on) = 0");
  return trace / s.prior_on();
}

double offset_error(const DecisionMatrix& q, const Scenario& s, std::size_t delta) {
  require_matching(q, s);
  const std::size_t n = q.size();
  if (delta >= n) {
    throw DomainError("offset_error: delta must not exceed N = " + std::to_string(n - 1));
  }
  double total = 0.0;
  for (HypothesisIndex i = 0; i < n; ++i) {
    if (i + delta < n) total += q.at(i, i + delta) * s.prior(i);
    if (delta > 0 && i >= delta) total += q.at(i, i - delta) * s.prior(i);
  }
  return total;
}

HypothesisIndex bayes_risk_decide(double y, const Scenario& s, const CostMatrix& c) {
  if (c.size() != s.num_levels()) {
    throw InvalidParameter("cost_matrix", "size does not match the scenario's levels");
  }
  const std::vector<double> post = posterior(y, s);
  HypothesisIndex best = 0;
  double best_risk = std::numeric_limits<double>::infinity();
  for (HypothesisIndex j = 0; j < post.size(); ++j) {
    double risk = 0.0;
    for (HypothesisIndex i = 0; i < post.size(); ++i) risk += c.at(i, j) * post[i];
    if (risk <= best_risk) {
      best_risk = risk;
      best = j;
    }
  }
  return best;
}

}  // namespace mptp
