#pragma once

namespace lldpd {

// Chi-square tail helpers for the 1 and 2 degree-of-freedom cases that the
// Wald-type and Rao-type tests need. For these df the regularized upper
// incomplete gamma has closed forms: Q(1/2, x/2) = erfc(sqrt(x/2)) and
// Q(1, x/2) = exp(-x/2). Other df raise std::invalid_argument.

/// P(χ²_df > statistic). Negative statistics are treated as 0 (p = 1).
double chi_square_upper_tail(double statistic, int df);

/// Critical value c with P(χ²_df > c) = level, for level in (0, 1).
double chi_square_critical_value(int df, double level);

/// Φ(z) for the standard normal.
double standard_normal_cdf(double z);

}  // namespace lldpd
