#pragma once

// Gamma-family special functions used by every analytic probability in the
// library. All functions are pure and thread-safe.

namespace mptp::gammafn {

inline constexpr int kMaxIterations = 1'000'000;

/// ln Γ(a) for a > 0. Throws DomainError otherwise.
double log_gamma(double a);

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).
///
/// Uses the power series for x < a + 1 and a Lentz continued fraction for the
/// complement otherwise. The common prefactor x^a e^{-x} / Γ(a) is evaluated
/// through a Stirling-corrected deviance so that shapes up to 1e6 keep full
/// relative precision. x = +inf yields 1.
///
/// Throws DomainError if a <= 0 or x < 0 (or NaN), ConvergenceError if the
/// iteration cap is hit.
double reg_lower_gamma(double a, double x);

/// Inverse of reg_lower_gamma in x: returns x >= 0 with P(a, x) = p.
/// Bracketed bisection; requires p in [0, 1).
double inv_reg_lower_gamma(double a, double p);

}  // namespace mptp::gammafn
