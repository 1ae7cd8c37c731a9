#include "lldpd/loglogistic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace lldpd {

namespace {

void require_positive_x(double x, const char* fn) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::domain_error(std::string(fn) + ": x must be finite and > 0, got " + std::to_string(x));
    }
}

// log(1 + e^t) without overflow.
double softplus(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace

ModelParams::ModelParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha > 0.0) || !std::isfinite(alpha) || !(beta > 0.0) || !std::isfinite(beta)) {
        throw std::domain_error("ModelParams: alpha and beta must be finite and > 0, got (" +
                                std::to_string(alpha) + ", " + std::to_string(beta) + ")");
    }
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("Sample: at least one observation is required");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
            throw std::domain_error("Sample: observation " + std::to_string(i) +
                                    " is not a finite positive number");
        }
    }
}

Sample Sample::scaled(double c) const {
    std::vector<double> out(values_);
    for (double& v : out) {
        v *= c;
    }
    return Sample(std::move(out));
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::derived(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t replicate) {
    return RandomStream(mix64(mix64(mix64(master_seed) ^ cell) ^ replicate));
}

double RandomStream::uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_index(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_index: bound must be > 0");
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return r % bound;
}

LogisticTerms logistic_terms(double x, const ModelParams& p) {
    const double log_x = std::log(x);
    const double log_ratio = log_x - std::log(p.alpha);
    const double z = p.beta * log_ratio;
    // log u = −softplus(−z), log(1 − u) = −softplus(z)
    const double log_u = -softplus(-z);
    const double log_1mu = -softplus(z);
    return LogisticTerms{
        .log_ratio = log_ratio,
        .u = std::exp(log_u),
        .tanh_half = std::tanh(0.5 * z),
        .log_pdf = std::log(p.beta) + log_u + log_1mu - log_x,
    };
}

double log_pdf(double x, const ModelParams& p) {
    require_positive_x(x, "log_pdf");
    return logistic_terms(x, p).log_pdf;
}

double pdf(double x, const ModelParams& p) {
    require_positive_x(x, "pdf");
    return std::exp(logistic_terms(x, p).log_pdf);
}

double cdf(double x, const ModelParams& p) {
    if (x == std::numeric_limits<double>::infinity()) {
        return 1.0;
    }
    require_positive_x(x, "cdf");
    return logistic_terms(x, p).u;
}

double quantile(double u, const ModelParams& p) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::domain_error("quantile: u must lie in (0, 1), got " + std::to_string(u));
    }
    return p.alpha * std::exp((std::log(u) - std::log1p(-u)) / p.beta);
}

Sample sample(std::size_t n, const ModelParams& p, RandomStream& rng) {
    if (n == 0) {
        throw std::invalid_argument("sample: n must be >= 1");
    }
    std::vector<double> values(n);
    for (double& v : values) {
        v = quantile(rng.uniform_open(), p);
    }
    return Sample(std::move(values));
}

double score_alpha(double x, const ModelParams& p) {
    require_positive_x(x, "score_alpha");
    return p.beta / p.alpha * logistic_terms(x, p).tanh_half;
}

double score_beta(double x, const ModelParams& p) {
    require_positive_x(x, "score_beta");
    const LogisticTerms t = logistic_terms(x, p);
    return -t.log_ratio * t.tanh_half + 1.0 / p.beta;
}

}  // namespace lldpd
