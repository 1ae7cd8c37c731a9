#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lldpd/dpd_objective.hpp"
#include "lldpd/linalg.hpp"
#include "lldpd/loglogistic.hpp"

namespace lldpd {

struct EstimateResult {
    ModelParams params;
    TuningParam tau;
    double objective_at_opt;
    std::size_t iterations;
    bool converged;
    /// Euclidean norm of ∂H/∂(α, β); for restricted fits the component
    /// orthogonal to the constraint normals.
    double gradient_norm;
};

/// Thrown when a fit fails; carries the best iterate found.
class EstimationError : public std::runtime_error {
public:
    EstimationError(const std::string& what, EstimateResult best)
        : std::runtime_error(what), best_(std::move(best)) {}
    [[nodiscard]] const EstimateResult& best() const noexcept { return best_; }

private:
    EstimateResult best_;
};

/// Restriction m(α, β) = 0 with r ∈ {1, 2} components and Jacobian
/// M = ∂mᵀ/∂θ of shape 2×r.
class ConstraintSpec {
public:
    enum class Kind { fix_alpha, fix_beta, fix_both, general };
    using Function = std::function<std::vector<double>(const ModelParams&)>;
    using Jacobian = std::function<Matrix(const ModelParams&)>;

    static ConstraintSpec fix_alpha(double alpha0);
    static ConstraintSpec fix_beta(double beta0);
    static ConstraintSpec fix_both(double alpha0, double beta0);
    /// Without `jacobian`, M is taken by central differences with step
    /// 1e-6 relative to each coordinate.
    static ConstraintSpec general(Function m, std::size_t r, std::optional<Jacobian> jacobian = std::nullopt);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t rank() const noexcept { return r_; }
    /// Fixed coordinates for the fix_* kinds.
    [[nodiscard]] double alpha0() const noexcept { return alpha0_; }
    [[nodiscard]] double beta0() const noexcept { return beta0_; }

    [[nodiscard]] std::vector<double> value(const ModelParams& p) const;
    [[nodiscard]] Matrix jacobian(const ModelParams& p) const;

private:
    ConstraintSpec(Kind kind, std::size_t r) : kind_(kind), r_(r) {}

    Kind kind_;
    std::size_t r_;
    double alpha0_ = 0.0;
    double beta0_ = 0.0;
    Function m_;
    std::optional<Jacobian> jacobian_;
};

struct FitOptions {
    std::optional<ModelParams> init;
    /// Five deterministic starts around the initial point instead of one.
    bool multistart = false;
    double gradient_tolerance = 1e-10;
    std::size_t max_iterations = 2000;
};

/// Gradient norm below which a fit is reported as converged.
inline constexpr double kConvergedGradientNorm = 1e-6;

/// Median and 2 ln 3 / (ln q₇₅ − ln q₂₅) clipped to [0.1, 100], with
/// type-7 sample quantiles. Throws std::invalid_argument when n < 2 or the
/// quartiles coincide.
ModelParams initial_guess(const Sample& s);

/// Maximizer of H_{n,τ} over (0, ∞)². Throws EstimationError when the
/// search does not converge, std::invalid_argument for n < 2 or constant data.
EstimateResult fit_mdpde(const Sample& s, TuningParam t, const FitOptions& options = {});

/// Maximizer of H_{n,τ} subject to m(θ) = 0. Coordinate-fix constraints run a
/// one-dimensional profile search; general constraints use an augmented
/// Lagrangian until |m| < 1e-8.
EstimateResult fit_restricted(const Sample& s, TuningParam t, const ConstraintSpec& c,
                              const FitOptions& options = {});

}  // namespace lldpd
