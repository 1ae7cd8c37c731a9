#pragma once

// Scalar special functions used by the log-logistic DPD formulas.
//
// All functions are pure and reentrant. Arguments must be finite and
// strictly positive; anything else raises std::domain_error.

namespace lldpd {

/// ln Γ(x) for x > 0 (Stirling series after upward recurrence).
double log_gamma(double x);

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
/// Symmetric in (a, b) bit-for-bit.
double log_beta(double a, double b);

/// Ψ(x) = d/dx ln Γ(x).
double digamma(double x);

/// Ψ'(x).
double trigamma(double x);

}  // namespace lldpd
