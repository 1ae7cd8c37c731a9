#pragma once

#include <cstddef>

#include "lldpd/asymptotics.hpp"
#include "lldpd/estimation.hpp"
#include "lldpd/test_outcome.hpp"

namespace lldpd {

// Wald-type tests built on the MDPDE θ̂_τ with Σ_τ = J⁻¹ K J⁻¹.

struct WaldOptions {
    /// Closed-form matrices are for auditing only.
    MatrixSource source = MatrixSource::quadrature;
    FitOptions fit;
    std::vector<double> levels = kDefaultLevels;
};

/// H₀: (α, β) = θ₀. W = n (θ̂ − θ₀)ᵀ Σ(θ₀)⁻¹ (θ̂ − θ₀), df 2.
TestOutcome wald_simple_full(const Sample& s, const ModelParams& null, TuningParam t, const WaldOptions& o = {});

/// H₀: α = α₀ with β known. The MDPDE of α is computed with β fixed and
/// W = n (α̂ − α₀)² (J¹¹)² / K¹¹ at (α₀, β), df 1.
TestOutcome wald_simple_alpha(const Sample& s, double alpha0, double beta_known, TuningParam t,
                              const WaldOptions& o = {});

/// H₀: β = β₀ with α known; mirror of wald_simple_alpha.
TestOutcome wald_simple_beta(const Sample& s, double beta0, double alpha_known, TuningParam t,
                             const WaldOptions& o = {});

/// H₀: m(θ) = 0. W = n m(θ̂)ᵀ [Mᵀ Σ M]⁻¹ m(θ̂) with every matrix at θ̂, df r.
TestOutcome wald_composite(const Sample& s, const ConstraintSpec& c, TuningParam t, const WaldOptions& o = {});

// Statistic assembly from precomputed pieces. `m` holds the matrices at the
// evaluation point the corresponding test above prescribes.

double wald_full_statistic(std::size_t n, const ModelParams& estimate, const ModelParams& null,
                           const AsymptoticMatrices& m);
double wald_alpha_statistic(std::size_t n, double alpha_hat, double alpha0, const AsymptoticMatrices& m);
double wald_beta_statistic(std::size_t n, double beta_hat, double beta0, const AsymptoticMatrices& m);
double wald_composite_statistic(std::size_t n, const ModelParams& estimate, const ConstraintSpec& c,
                                const AsymptoticMatrices& m);

}  // namespace lldpd
