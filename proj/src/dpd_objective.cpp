#include "lldpd/dpd_objective.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lldpd/special_functions.hpp"

namespace lldpd {

namespace {

// Per-observation contributions: [objective term, d/dα term, d/dβ term].
using Terms = std::array<double, 3>;

Terms observation_terms(double x, const ModelParams& p, double tau) {
    const LogisticTerms lt = logistic_terms(x, p);
    const double s_alpha = p.beta / p.alpha * lt.tanh_half;
    const double s_beta = -lt.log_ratio * lt.tanh_half + 1.0 / p.beta;
    if (tau == 0.0) {
        return {lt.log_pdf, s_alpha, s_beta};
    }
    const double f_tau = std::exp(tau * lt.log_pdf);
    return {f_tau, s_alpha * f_tau, s_beta * f_tau};
}

Terms add(const Terms& a, const Terms& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

// Chunked sum with a fixed pairwise reduction tree over chunk totals.
Terms summed_terms(std::span<const double> xs, const ModelParams& p, double tau) {
    const std::size_t chunks = (xs.size() + detail::kSummationChunk - 1) / detail::kSummationChunk;
    std::vector<Terms> partial(chunks, Terms{0.0, 0.0, 0.0});
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = c * detail::kSummationChunk;
        const std::size_t end = std::min(xs.size(), begin + detail::kSummationChunk);
        Terms acc{0.0, 0.0, 0.0};
        for (std::size_t i = begin; i < end; ++i) {
            acc = add(acc, observation_terms(xs[i], p, tau));
        }
        partial[c] = acc;
    }
    for (std::size_t width = 1; width < partial.size(); width *= 2) {
        for (std::size_t i = 0; i + width < partial.size(); i += 2 * width) {
            partial[i] = add(partial[i], partial[i + width]);
        }
    }
    return partial.empty() ? Terms{0.0, 0.0, 0.0} : partial[0];
}

}  // namespace

TuningParam::TuningParam(double tau) : tau_(tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw std::domain_error("TuningParam: tau must be finite and >= 0, got " + std::to_string(tau));
    }
}

Vec2 integral_beta_arguments(const ModelParams& p, TuningParam t) {
    const double tau = t.value();
    const double a1 = (p.beta * tau + tau + p.beta) / p.beta;
    const double a2 = (p.beta * tau - tau + p.beta) / p.beta;
    if (!(a1 > 0.0) || !(a2 > 0.0)) {
        throw std::domain_error("integral of f^(1+tau) diverges: beta-function argument (" +
                                std::to_string(a1) + ", " + std::to_string(a2) +
                                ") is not positive; need beta*tau - tau + beta > 0");
    }
    return {a1, a2};
}

double log_integral_term(const ModelParams& p, TuningParam t) {
    const Vec2 a = integral_beta_arguments(p, t);
    return t.value() * std::log(p.beta / p.alpha) + log_beta(a[0], a[1]);
}

double integral_term(const ModelParams& p, TuningParam t) {
    return std::exp(log_integral_term(p, t));
}

Vec2 integral_term_gradient(const ModelParams& p, TuningParam t) {
    const double tau = t.value();
    if (tau == 0.0) {
        integral_beta_arguments(p, t);
        return {0.0, 0.0};
    }
    const Vec2 a = integral_beta_arguments(p, t);
    const double integral = integral_term(p, t);
    const double d_alpha = -tau / p.alpha * integral;
    const double d_beta =
        integral * (tau / p.beta + tau / (p.beta * p.beta) * (digamma(a[1]) - digamma(a[0])));
    return {d_alpha, d_beta};
}

ObjectiveValue objective(const Sample& s, const ModelParams& p, TuningParam t) {
    return ObjectiveValue{objective_with_gradient(s, p, t).value, t, s.size()};
}

Vec2 objective_gradient(const Sample& s, const ModelParams& p, TuningParam t) {
    return objective_with_gradient(s, p, t).gradient;
}

ObjectiveWithGradient objective_with_gradient(const Sample& s, const ModelParams& p, TuningParam t) {
    const double tau = t.value();
    const double n = static_cast<double>(s.size());
    if (tau == 0.0) {
        const Terms sum = summed_terms(s.values(), p, 0.0);
        return {sum[0] / n, {sum[1] / n, sum[2] / n}};
    }
    // Validates the beta arguments before touching the data.
    const double integral = integral_term(p, t);
    const Vec2 d_integral = integral_term_gradient(p, t);
    const Terms sum = summed_terms(s.values(), p, tau);
    const double value = (1.0 + 1.0 / tau) * (sum[0] / n) - integral - 1.0 / tau;
    return {value,
            {(1.0 + tau) * (sum[1] / n) - d_integral[0], (1.0 + tau) * (sum[2] / n) - d_integral[1]}};
}

}  // namespace lldpd
