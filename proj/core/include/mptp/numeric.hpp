#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace mptp {

// ln Σ exp(v_k); -inf for an empty span or when every term is -inf.
inline double log_sum_exp(std::span<const double> values) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

inline bool relatively_close(double a, double b, double rel) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace mptp
