#pragma once

#include <cstddef>
#include <span>

#include "lldpd/linalg.hpp"
#include "lldpd/loglogistic.hpp"

namespace lldpd {

/// DPD tuning constant τ ≥ 0; τ = 0 selects maximum likelihood.
class TuningParam {
public:
    explicit TuningParam(double tau);

    [[nodiscard]] double value() const noexcept { return tau_; }
    [[nodiscard]] bool is_likelihood() const noexcept { return tau_ == 0.0; }
    [[nodiscard]] TuningParam doubled() const { return TuningParam(2.0 * tau_); }

    friend bool operator==(const TuningParam&, const TuningParam&) = default;

private:
    double tau_;
};

struct ObjectiveValue {
    double value;
    TuningParam tau;
    std::size_t n;
};

/// Beta-function arguments of ∫ f^{1+τ}: (βτ+τ+β)/β and (βτ−τ+β)/β.
/// Throws std::domain_error when either is ≤ 0 (β < 1 with large τ).
Vec2 integral_beta_arguments(const ModelParams& p, TuningParam t);

/// ln ∫₀^∞ f^{1+τ} dx = τ ln(β/α) + ln B(a₁, a₂).
double log_integral_term(const ModelParams& p, TuningParam t);

/// ∫₀^∞ f^{1+τ} dx.
double integral_term(const ModelParams& p, TuningParam t);

/// (∂/∂α, ∂/∂β) of ∫ f^{1+τ} dx, by differentiating the beta-function form.
/// Since a₁ + a₂ = 2 + 2τ does not depend on β, only Ψ(a₂) − Ψ(a₁) survives.
Vec2 integral_term_gradient(const ModelParams& p, TuningParam t);

/// H_{n,τ}(α, β). For τ > 0:
///   (1 + 1/τ) mean f^τ(X_i) − ∫ f^{1+τ} − 1/τ,
/// and for τ = 0 the mean log-density (additive constant dropped).
ObjectiveValue objective(const Sample& s, const ModelParams& p, TuningParam t);

/// Analytic gradient of objective() in (α, β). For τ > 0 this is
/// (1 + τ) (mean(score · f^τ) − ∂∫f^{1+τ}/∂θ / (1 + τ)).
Vec2 objective_gradient(const Sample& s, const ModelParams& p, TuningParam t);

/// Objective and gradient in one pass over the sample.
struct ObjectiveWithGradient {
    double value;
    Vec2 gradient;
};
ObjectiveWithGradient objective_with_gradient(const Sample& s, const ModelParams& p, TuningParam t);

namespace detail {

/// Observations are accumulated in chunks of this many terms; chunk sums
/// are then combined pairwise. The order is fixed, so the result does not
/// depend on how chunks are scheduled.
inline constexpr std::size_t kSummationChunk = 1024;

}  // namespace detail

}  // namespace lldpd
