#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace lldpd {

/// Scale `alpha` (the median) and shape `beta` of a log-logistic law.
struct ModelParams {
    double alpha;
    double beta;

    /// Throws std::domain_error unless both are finite and > 0.
    ModelParams(double alpha_, double beta_);

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// A non-empty sample of strictly positive, finite observations.
class Sample {
public:
    explicit Sample(std::vector<double> values);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    /// Copy with every observation multiplied by c > 0.
    [[nodiscard]] Sample scaled(double c) const;

private:
    std::vector<double> values_;
};

/// Deterministic uniform source built on mt19937_64. The conversion to
/// (0, 1) is done here rather than by std::uniform_real_distribution so
/// draws are identical across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Stream for replicate `replicate` of cell `cell` under `master_seed`.
    static RandomStream derived(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t replicate);

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open();

    /// Uniform integer on [0, bound), bound > 0, without modulo bias.
    std::uint64_t uniform_index(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; the mixing function behind RandomStream::derived.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Quantities shared by the density, cdf and scores at one observation.
/// With z = β log(x/α), u = cdf(x) = 1/(1 + e^{−z}).
struct LogisticTerms {
    double log_ratio;  // log(x / α)
    double u;          // cdf(x)
    double tanh_half;  // 2u − 1 = tanh(z / 2)
    double log_pdf;
};

LogisticTerms logistic_terms(double x, const ModelParams& p);

double pdf(double x, const ModelParams& p);
double log_pdf(double x, const ModelParams& p);
double cdf(double x, const ModelParams& p);
double quantile(double u, const ModelParams& p);

/// n inverse-cdf draws.
Sample sample(std::size_t n, const ModelParams& p, RandomStream& rng);

/// ∂ log f / ∂α = β (x^β − α^β) / (α (x^β + α^β)).
double score_alpha(double x, const ModelParams& p);

/// ∂ log f / ∂β = log(x/α) (α^β − x^β)/(α^β + x^β) + 1/β.
double score_beta(double x, const ModelParams& p);

}  // namespace lldpd
