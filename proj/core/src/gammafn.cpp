#include "mptp/gammafn.hpp"

#include <math.h>  // lgamma_r

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mptp/errors.hpp"

namespace mptp::gammafn {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

// lgamma(a) - [(a - 1/2) ln a - a + ln sqrt(2 pi)]
double stirling_error(double a) {
  if (a >= 15.0) {
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    return inv *
           (1.0 / 12.0 -
            inv2 * (1.0 / 360.0 -
                    inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
  }
  constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;
  return log_gamma(a) - ((a - 0.5) * std::log(a) - a + kLnSqrt2Pi);
}

// a ln(a/x) + x - a, accurate when x is close to a.
double deviance(double a, double x) {
  const double diff = a - x;
  if (std::abs(diff) < 0.1 * (a + x)) {
    const double v = diff / (a + x);
    const double v2 = v * v;
    double sum = diff * v;
    double term = 2.0 * a * v;
    for (int j = 1; j < 1000; ++j) {
      term *= v2;
      const double next = sum + term / (2 * j + 1);
      if (next == sum) return sum;
      sum = next;
    }
    return sum;
  }
  return a * std::log(a / x) + x - a;
}

// ln[x^a e^{-x} / Γ(a)], for x > 0.
double log_prefactor(double a, double x) {
  return -deviance(a, x) + 0.5 * std::log(a / (2.0 * std::numbers::pi)) -
         stirling_error(a);
}

double lower_series(double a, double x) {
  double denom = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n <= kMaxIterations; ++n) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(log_prefactor(a, x));
    }
  }
  throw ConvergenceError("reg_lower_gamma: series did not converge for a=" +
                         std::to_string(a) + ", x=" + std::to_string(x));
}

// Q(a, x) via the modified Lentz evaluation of the continued fraction.
double upper_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return std::exp(log_prefactor(a, x)) * h;
    }
  }
  throw ConvergenceError(
      "reg_lower_gamma: continued fraction did not converge for a=" +
      std::to_string(a) + ", x=" + std::to_string(x));
}

}  // namespace

double log_gamma(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("log_gamma: requires finite a > 0, got " + std::to_string(a));
  }
  int sign = 0;
  return ::lgamma_r(a, &sign);
}

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("reg_lower_gamma: requires finite a > 0, got a=" +
                      std::to_string(a));
  }
  if (!(x >= 0.0)) {
    throw DomainError("reg_lower_gamma: requires x >= 0, got x=" + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) {
    const double p = lower_series(a, x);
    return p > 1.0 ? 1.0 : p;
  }
  const double q = upper_continued_fraction(a, x);
  return q > 1.0 ? 0.0 : 1.0 - q;
}

double inv_reg_lower_gamma(double a, double p) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("inv_reg_lower_gamma: requires finite a > 0");
  }
  if (!(p >= 0.0 && p < 1.0)) {
    throw DomainError("inv_reg_lower_gamma: requires p in [0, 1), got " +
                      std::to_string(p));
  }
  if (p == 0.0) return 0.0;

  double lo = 0.0;
  double hi = a;
  if (reg_lower_gamma(a, hi) < p) {
    lo = hi;
    while (reg_lower_gamma(a, hi) < p) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) {
        throw ConvergenceError("inv_reg_lower_gamma: failed to bracket root");
      }
    }
  } else {
    lo = hi * 0.5;
    while (lo > 0.0 && reg_lower_gamma(a, lo) >= p) {
      hi = lo;
      lo *= 0.5;
    }
  }

  for (int iter = 0; iter < 4096; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (reg_lower_gamma(a, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double err_lo = std::abs(reg_lower_gamma(a, lo) - p);
  const double err_hi = std::abs(reg_lower_gamma(a, hi) - p);
  return err_lo < err_hi ? lo : hi;
}

}  // namespace mptp::gammafn
