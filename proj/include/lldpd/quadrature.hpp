#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <stdexcept>

namespace lldpd {

struct QuadratureOptions {
    double abs_tolerance = 1e-13;
    /// Floor relative to the largest component; keeps the target reachable
    /// when entries are large enough that the absolute target is below roundoff.
    double rel_tolerance = 1e-13;
    std::size_t max_subdivisions = 20000;
};

template <std::size_t N>
struct QuadratureResult {
    std::array<double, N> value{};
    double error_estimate = 0.0;
    std::size_t subdivisions = 0;
};

/// Raised when the adaptive scheme exhausts its subdivision budget.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(double achieved, double requested);

    [[nodiscard]] double achieved_tolerance() const noexcept { return achieved_; }
    [[nodiscard]] double requested_tolerance() const noexcept { return requested_; }

private:
    double achieved_;
    double requested_;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
    double a;
    double b;
    std::array<double, N> value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <std::size_t N, class F>
Panel<N> kronrod_panel(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, N> kronrod{};
    std::array<double, N> gauss{};
    const std::array<double, N> fc = f(centre);
    for (std::size_t k = 0; k < N; ++k) {
        kronrod[k] = kKronrodWeights[7] * fc[k];
        gauss[k] = kGaussWeights[3] * fc[k];
    }
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const std::array<double, N> lo = f(centre - dx);
        const std::array<double, N> hi = f(centre + dx);
        for (std::size_t k = 0; k < N; ++k) {
            const double pair = lo[k] + hi[k];
            kronrod[k] += kKronrodWeights[j] * pair;
            if (j % 2 == 1) {
                gauss[k] += kGaussWeights[j / 2] * pair;
            }
        }
    }
    Panel<N> panel{a, b, {}, 0.0};
    for (std::size_t k = 0; k < N; ++k) {
        panel.value[k] = kronrod[k] * half;
        panel.error = std::max(panel.error, std::abs((kronrod[k] - gauss[k]) * half));
    }
    return panel;
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) integration of a vector-valued
/// integrand over [a, b]. The integrand is never evaluated at the endpoints,
/// so integrable endpoint singularities are allowed. The error criterion is
/// the summed per-panel estimate of the worst component.
template <std::size_t N, class F>
QuadratureResult<N> integrate(F f, double a, double b, const QuadratureOptions& options = {}) {
    std::priority_queue<detail::Panel<N>> panels;
    panels.push(detail::kronrod_panel<N>(f, a, b));
    std::array<double, N> total = panels.top().value;
    double error = panels.top().error;
    std::size_t subdivisions = 0;
    for (;;) {
        double scale = 0.0;
        for (double v : total) {
            scale = std::max(scale, std::abs(v));
        }
        const double target = std::max(options.abs_tolerance, options.rel_tolerance * scale);
        if (error <= target) {
            break;
        }
        if (subdivisions >= options.max_subdivisions) {
            throw QuadratureError(error, target);
        }
        const detail::Panel<N> worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const detail::Panel<N> left = detail::kronrod_panel<N>(f, worst.a, mid);
        const detail::Panel<N> right = detail::kronrod_panel<N>(f, mid, worst.b);
        for (std::size_t k = 0; k < N; ++k) {
            total[k] += left.value[k] + right.value[k] - worst.value[k];
        }
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++subdivisions;
    }
    // Re-sum from scratch to drop the drift of the running updates.
    QuadratureResult<N> result;
    result.subdivisions = subdivisions;
    while (!panels.empty()) {
        const detail::Panel<N>& top = panels.top();
        for (std::size_t k = 0; k < N; ++k) {
            result.value[k] += top.value[k];
        }
        result.error_estimate += top.error;
        panels.pop();
    }
    return result;
}

}  // namespace lldpd
