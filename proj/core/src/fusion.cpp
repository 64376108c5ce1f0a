#include "mptp/fusion.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "mptp/errors.hpp"
#include "mptp/gammafn.hpp"
#include "mptp/numeric.hpp"

namespace mptp::fusion {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > kSaturated / (n - k + i)) return kSaturated;
    r = r * (n - k + i) / i;
  }
  return r;
}

int vote_total(const VoteVector& d) { return std::accumulate(d.begin(), d.end(), 0); }

void require_votes(const VoteVector& d, std::size_t levels, int users) {
  if (d.size() != levels) {
    throw InvalidParameter("votes", "vote vector has " + std::to_string(d.size()) +
                                        " entries, expected " + std::to_string(levels));
  }
  for (int v : d) {
    if (v < 0) throw InvalidParameter("votes", "vote counts must be nonnegative");
  }
  if (vote_total(d) != users) {
    throw InvalidParameter("votes", "vote counts must sum to K = " + std::to_string(users));
  }
}

std::string describe(const VoteVector& d) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << ')';
  return os.str();
}

void guard_enumeration(int users, int power_levels, std::uint64_t cap) {
  if (users < 1) throw InvalidParameter("users", "K must be at least 1");
  if (power_levels < 1) throw InvalidParameter("power_levels", "N must be at least 1");
  const std::uint64_t count = vote_vector_count(users, power_levels);
  if (count > cap) {
    throw ResourceLimit("vote enumeration needs C(K+N, N) = " + std::to_string(count) +
                        " vectors, above the cap of " + std::to_string(cap));
  }
}

}  // namespace

std::uint64_t vote_vector_count(int users, int power_levels) {
  return binomial(static_cast<std::uint64_t>(users) + power_levels,
                  static_cast<std::uint64_t>(power_levels));
}

std::vector<VoteVector> enumerate_votes(int users, int power_levels, std::uint64_t cap) {
  guard_enumeration(users, power_levels, cap);
  const std::size_t parts = static_cast<std::size_t>(power_levels) + 1;
  std::vector<VoteVector> out;
  out.reserve(vote_vector_count(users, power_levels));
  VoteVector d(parts, 0);
  std::function<void(std::size_t, int)> fill = [&](std::size_t pos, int remaining) {
    if (pos + 1 == parts) {
      d[pos] = remaining;
      out.push_back(d);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      d[pos] = v;
      fill(pos + 1, remaining - v);
    }
  };
  fill(0, users);
  return out;
}

std::size_t vote_rank(const VoteVector& d) {
  const std::size_t parts = d.size();
  int remaining = vote_total(d);
  std::uint64_t rank = 0;
  for (std::size_t p = 0; p + 1 < parts; ++p) {
    const std::uint64_t m = parts - p - 1;  // positions after p
    // Σ_{v < d_p} C(remaining - v + m - 1, m - 1)
    rank += binomial(static_cast<std::uint64_t>(remaining) + m, m) -
            binomial(static_cast<std::uint64_t>(remaining - d[p]) + m, m);
    remaining -= d[p];
  }
  return static_cast<std::size_t>(rank);
}

VoteVector tally(const VoteOutcome& outcome, std::size_t levels) {
  VoteVector d(levels, 0);
  for (HypothesisIndex j : outcome) ++d.at(j);
  return d;
}

double log_vote_prob(const VoteVector& d, const DecisionMatrix& local, int users,
                     HypothesisIndex i) {
  require_votes(d, local.size(), users);
  double log_p = gammafn::log_gamma(users + 1.0);
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (d[n] == 0) continue;  // 0^0 = 1
    const double q = local.at(i, n);
    if (q == 0.0) return -std::numeric_limits<double>::infinity();
    log_p += d[n] * std::log(q) - gammafn::log_gamma(d[n] + 1.0);
  }
  return log_p;
}

double vote_prob(const VoteVector& d, const DecisionMatrix& local, int users,
                 HypothesisIndex i) {
  return std::exp(log_vote_prob(d, local, users, i));
}

double vote_prob_hetero(const VoteVector& d, const std::vector<DecisionMatrix>& locals,
                        HypothesisIndex i) {
  const int users = static_cast<int>(locals.size());
  if (users < 1 || users > kHeteroMaxUsers) {
    throw ResourceLimit("vote_prob_hetero supports 1.." + std::to_string(kHeteroMaxUsers) +
                        " users");
  }
  const std::size_t levels = locals.front().size();
  for (const auto& m : locals) {
    if (m.size() != levels) throw InvalidParameter("locals", "matrix sizes differ");
  }
  if (std::pow(static_cast<double>(levels), users) > static_cast<double>(kHeteroOutcomeCap)) {
    throw ResourceLimit("vote_prob_hetero: (N+1)^K exceeds " +
                        std::to_string(kHeteroOutcomeCap) + " outcomes");
  }
  require_votes(d, levels, users);

  VoteVector remaining = d;
  std::function<double(std::size_t)> sum_from = [&](std::size_t k) -> double {
    if (k == locals.size()) return 1.0;
    double total = 0.0;
    for (std::size_t n = 0; n < levels; ++n) {
      if (remaining[n] == 0) continue;
      const double q = locals[k].at(i, n);
      if (q == 0.0) continue;
      --remaining[n];
      total += q * sum_from(k + 1);
      ++remaining[n];
    }
    return total;
  };
  return sum_from(0);
}

HypothesisIndex majority_decide(const VoteVector& d) {
  if (d.size() < 2) throw InvalidParameter("votes", "need at least two levels");
  const int users = vote_total(d);
  if (2 * d[0] > users) return 0;
  HypothesisIndex best = 1;
  for (HypothesisIndex j = 2; j < d.size(); ++j) {
    if (d[j] >= d[best]) best = j;
  }
  return best;
}

HypothesisIndex optimal_decide(const VoteVector& d, const Scenario& s,
                               const DecisionMatrix& local) {
  const std::size_t levels = s.num_levels();
  if (local.size() != levels) {
    throw InvalidParameter("local", "local matrix does not match the scenario");
  }
  require_votes(d, levels, vote_total(d));
  // The multinomial coefficient is common to every hypothesis and cancels.
  std::vector<double> score(levels);
  for (HypothesisIndex i = 0; i < levels; ++i) {
    double v = s.log_prior(i);
    for (std::size_t n = 0; n < levels && std::isfinite(v); ++n) {
      if (d[n] == 0) continue;
      const double q = local.at(i, n);
      v = q == 0.0 ? -std::numeric_limits<double>::infinity() : v + d[n] * std::log(q);
    }
    score[i] = v;
  }
  const double on = log_sum_exp(std::span<const double>(score).subspan(1));
  if (score[0] > on) return 0;
  HypothesisIndex best = 1;
  for (HypothesisIndex i = 2; i < levels; ++i) {
    if (score[i] >= score[best]) best = i;
  }
  return best;
}

FusionRule::FusionRule(RuleKind kind, int users, std::size_t levels,
                       std::vector<VoteVector> votes, std::vector<HypothesisIndex> decisions)
    : kind_(kind),
      users_(users),
      levels_(levels),
      votes_(std::move(votes)),
      decisions_(std::move(decisions)) {}

FusionRule FusionRule::majority(int users, int power_levels, std::uint64_t cap) {
  std::vector<VoteVector> votes = enumerate_votes(users, power_levels, cap);
  std::vector<HypothesisIndex> decisions;
  decisions.reserve(votes.size());
  for (const auto& d : votes) decisions.push_back(majority_decide(d));
  return FusionRule(RuleKind::Majority, users, static_cast<std::size_t>(power_levels) + 1,
                    std::move(votes), std::move(decisions));
}

FusionRule FusionRule::optimal(const Scenario& s, const DecisionMatrix& local, int users,
                               std::uint64_t cap) {
  const int power_levels = static_cast<int>(s.num_power_levels());
  std::vector<VoteVector> votes = enumerate_votes(users, power_levels, cap);
  std::vector<HypothesisIndex> decisions;
  decisions.reserve(votes.size());
  for (const auto& d : votes) decisions.push_back(optimal_decide(d, s, local));
  return FusionRule(RuleKind::OptimalMap, users, s.num_levels(), std::move(votes),
                    std::move(decisions));
}

DecisionMatrix fused_matrix(const FusionRule& rule, const DecisionMatrix& local) {
  const std::size_t levels = rule.levels();
  if (local.size() != levels) {
    throw InvalidParameter("local", "local matrix does not match the fusion rule");
  }
  std::vector<std::vector<double>> rows(levels, std::vector<double>(levels, 0.0));
  for (std::size_t k = 0; k < rule.votes().size(); ++k) {
    const VoteVector& d = rule.votes()[k];
    const HypothesisIndex j = rule.decisions()[k];
    for (HypothesisIndex i = 0; i < levels; ++i) {
      rows[i][j] += vote_prob(d, local, rule.users(), i);
    }
  }
  return DecisionMatrix::from_rows(rows, Provenance::Analytic);
}

DecisionMatrix majority_matrix(const DecisionMatrix& local, int users, std::uint64_t cap) {
  return fused_matrix(FusionRule::majority(users, static_cast<int>(local.size()) - 1, cap),
                      local);
}

DecisionMatrix majority_matrix_closed(const DecisionMatrix& local, int users,
                                      std::uint64_t cap) {
  const int n_levels = static_cast<int>(local.size()) - 1;  // N
  guard_enumeration(users, n_levels, cap);
  const int k_users = users;
  const std::size_t levels = local.size();
  std::vector<std::vector<double>> rows(levels, std::vector<double>(levels, 0.0));
  VoteVector d(levels, 0);

  auto assigned_below = [&](int n) {  // Σ_{i=0}^{n-1} d_i
    int total = 0;
    for (int i = 0; i < n; ++i) total += d[i];
    return total;
  };
  auto add_leaf = [&](HypothesisIndex j) {
    if (vote_total(d) != k_users) {
      std::ostringstream os;
      os << "closed-form majority summation produced an infeasible vote vector: K="
         << k_users << " N=" << n_levels << " d=" << describe(d);
      throw ConsistencyError(os.str());
    }
    for (HypothesisIndex i = 0; i < levels; ++i) {
      rows[i][j] += vote_prob(d, local, k_users, i);
    }
  };

  // j = 0: d_0 from floor(K/2)+1 to K, d_1..d_{N-1} free, d_N takes the rest.
  {
    std::function<void(int)> inner = [&](int n) {
      if (n == n_levels) {
        d[n] = k_users - assigned_below(n);
        add_leaf(0);
        return;
      }
      const int hi = k_users - assigned_below(n);
      for (int v = 0; v <= hi; ++v) {
        d[n] = v;
        inner(n + 1);
      }
      d[n] = 0;
    };
    for (int d0 = k_users / 2 + 1; d0 <= k_users; ++d0) {
      d.assign(levels, 0);
      d[0] = d0;
      inner(1);
    }
  }

  // j >= 1: nested sums over d_0, d_j, then d_1..d_{j-1}, d_{j+1}..d_N with
  // limits [max(0, α_n), min(d_j or d_j - 1, β_n)].
  for (int j = 1; j <= n_levels; ++j) {
    std::vector<int> order;
    for (int n = 1; n <= n_levels; ++n) {
      if (n != j) order.push_back(n);
    }
    std::function<void(std::size_t)> inner = [&](std::size_t pos) {
      if (pos == order.size()) {
        add_leaf(static_cast<HypothesisIndex>(j));
        return;
      }
      const int n = order[pos];
      const int dj = d[j];
      int alpha = 0;
      int beta = 0;
      int cap_n = 0;
      if (n < j) {
        alpha = k_users - assigned_below(n) - (n_levels - n) * dj + n_levels - j;
        beta = k_users - assigned_below(n) - dj;
        cap_n = dj;
      } else {
        alpha = k_users - assigned_below(n) - (n_levels - n) * dj + n_levels - n;
        beta = k_users - assigned_below(n);
        cap_n = dj - 1;
      }
      const int lo = std::max(0, alpha);
      const int hi = std::min(cap_n, beta);
      for (int v = lo; v <= hi; ++v) {
        d[n] = v;
        inner(pos + 1);
      }
      d[n] = 0;
    };
    for (int d0 = 0; d0 <= k_users / 2; ++d0) {
      const int first_dj = (k_users - d0 + n_levels - 1) / n_levels;
      for (int dj = first_dj; dj <= k_users - d0; ++dj) {
        d.assign(levels, 0);
        d[0] = d0;
        d[j] = dj;
        inner(0);
      }
    }
  }
  return DecisionMatrix::from_rows(rows, Provenance::Analytic);
}

DecisionMatrix optimal_matrix(const Scenario& s, const DecisionMatrix& local, int users,
                              std::uint64_t cap) {
  return fused_matrix(FusionRule::optimal(s, local, users, cap), local);
}

}  // namespace mptp::fusion
