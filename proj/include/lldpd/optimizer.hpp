#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lldpd {

/// Objective to minimize: returns f(x) and writes ∇f(x) into `grad`.
/// Non-finite values mark x as infeasible.
using GradientObjective = std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Norm used for the stopping test, given x and ∇f(x). Lets callers test
/// convergence in a parametrization other than the search space.
using StoppingNorm = std::function<double(std::span<const double> x, std::span<const double> grad)>;

struct OptimizerOptions {
    double gradient_tolerance = 1e-10;
    double simplex_tolerance = 1e-9;
    std::size_t max_iterations = 2000;
    /// Largest step (Euclidean, search space) a single line search may try.
    double max_step = 1.0;
};

struct OptimizerResult {
    std::vector<double> x;
    double value;
    std::vector<double> gradient;
    double stopping_norm;
    std::size_t iterations;
    bool reached_tolerance;  // stopping_norm <= gradient_tolerance
    bool used_simplex;
};

/// BFGS with backtracking line search. When the line search fails, continues
/// with Nelder–Mead from the current point and then retries BFGS once. Always
/// returns the best point seen; `reached_tolerance` reports whether the
/// stopping norm met the tolerance.
OptimizerResult minimize_quasi_newton(const GradientObjective& f, std::vector<double> x0,
                                      const StoppingNorm& stopping_norm, const OptimizerOptions& options = {});

/// Derivative-free Nelder–Mead; stops when the simplex diameter falls below
/// options.simplex_tolerance or the iteration budget is spent.
OptimizerResult minimize_simplex(const GradientObjective& f, std::vector<double> x0, double initial_step,
                                 const StoppingNorm& stopping_norm, const OptimizerOptions& options = {});

}  // namespace lldpd
