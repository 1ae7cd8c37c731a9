#include "lldpd/chi_square.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lldpd {

namespace {

void require_supported_df(int df) {
    if (df != 1 && df != 2) {
        throw std::invalid_argument("chi-square: only df in {1, 2} is supported, got " +
                                    std::to_string(df));
    }
}

}  // namespace

double chi_square_upper_tail(double statistic, int df) {
    require_supported_df(df);
    if (std::isnan(statistic)) {
        throw std::domain_error("chi_square_upper_tail: statistic is NaN");
    }
    const double x = std::max(statistic, 0.0);
    if (df == 1) {
        return std::erfc(std::sqrt(0.5 * x));
    }
    return std::exp(-0.5 * x);
}

double chi_square_critical_value(int df, double level) {
    require_supported_df(df);
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("chi_square_critical_value: level must lie in (0, 1)");
    }
    if (df == 2) {
        return -2.0 * std::log(level);
    }
    // Solve erfc(z) = level for z = sqrt(x / 2): bracket, then Newton with
    // bisection safeguard. erfc is strictly decreasing on [0, inf).
    double lo = 0.0;
    double hi = 1.0;
    while (std::erfc(hi) > level) {
        hi *= 2.0;
    }
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double r = std::erfc(z) - level;
        if (r > 0.0) {
            lo = z;
        } else {
            hi = z;
        }
        const double slope = -2.0 / std::sqrt(std::numbers::pi) * std::exp(-z * z);
        double next = z - r / slope;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - z) <= 1e-16 * std::max(1.0, z)) {
            z = next;
            break;
        }
        z = next;
    }
    return 2.0 * z * z;
}

double standard_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace lldpd
