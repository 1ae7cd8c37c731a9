#include "lldpd/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "lldpd/optimizer.hpp"

namespace lldpd {

namespace {

constexpr double kLogBound = 700.0;
constexpr double kFeasibility = 1e-8;
constexpr double kFdStep = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_fit_data(const Sample& s) {
    if (s.size() < 2) {
        throw std::invalid_argument("estimation needs at least two observations");
    }
    const auto v = s.values();
    if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
        throw std::invalid_argument("estimation needs non-constant data");
    }
}

double quantile_type7(const std::vector<double>& sorted, double prob) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// −H and its gradient in (log α, log β); infeasible points give +∞.
double negative_objective(const Sample& s, TuningParam t, double log_alpha, double log_beta, Vec2& grad_theta) {
    if (!(std::abs(log_alpha) < kLogBound && std::abs(log_beta) < kLogBound)) {
        return kInf;
    }
    try {
        const ModelParams p(std::exp(log_alpha), std::exp(log_beta));
        const ObjectiveWithGradient og = objective_with_gradient(s, p, t);
        grad_theta = og.gradient;
        return -og.value;
    } catch (const std::domain_error&) {
        return kInf;
    }
}

struct Evaluation {
    double value;      // H
    Vec2 gradient;     // ∂H/∂θ
};

Evaluation evaluate(const Sample& s, TuningParam t, const ModelParams& p) {
    const ObjectiveWithGradient og = objective_with_gradient(s, p, t);
    return {og.value, og.gradient};
}

EstimateResult make_result(const ModelParams& p, TuningParam t, double value, std::size_t iterations,
                           double gradient_norm) {
    return {p, t, value, iterations, gradient_norm < kConvergedGradientNorm, gradient_norm};
}

EstimateResult fit_unrestricted_from(const Sample& s, TuningParam t, const ModelParams& start,
                                     const FitOptions& options) {
    GradientObjective f = [&](std::span<const double> eta, std::span<double> g) {
        Vec2 gt{};
        const double v = negative_objective(s, t, eta[0], eta[1], gt);
        if (std::isfinite(v)) {
            g[0] = -gt[0] * std::exp(eta[0]);
            g[1] = -gt[1] * std::exp(eta[1]);
        }
        return v;
    };
    StoppingNorm natural = [](std::span<const double> eta, std::span<const double> g) {
        return std::hypot(g[0] / std::exp(eta[0]), g[1] / std::exp(eta[1]));
    };
    OptimizerOptions oo;
    oo.gradient_tolerance = options.gradient_tolerance;
    oo.max_iterations = options.max_iterations;
    const OptimizerResult r =
        minimize_quasi_newton(f, {std::log(start.alpha), std::log(start.beta)}, natural, oo);
    if (!std::isfinite(r.value)) {
        throw std::invalid_argument("objective is not finite at the starting point");
    }
    const ModelParams p(std::exp(r.x[0]), std::exp(r.x[1]));
    return make_result(p, t, -r.value, r.iterations, r.stopping_norm);
}

// Profile search over one coordinate with the other held fixed.
EstimateResult fit_profile(const Sample& s, TuningParam t, bool free_alpha, double fixed, double start,
                           const FitOptions& options) {
    const std::size_t k = free_alpha ? 0 : 1;
    GradientObjective f = [&](std::span<const double> eta, std::span<double> g) {
        Vec2 gt{};
        const double la = free_alpha ? eta[0] : std::log(fixed);
        const double lb = free_alpha ? std::log(fixed) : eta[0];
        const double v = negative_objective(s, t, la, lb, gt);
        if (std::isfinite(v)) {
            g[0] = -gt[k] * std::exp(eta[0]);
        }
        return v;
    };
    StoppingNorm natural = [](std::span<const double> eta, std::span<const double> g) {
        return std::abs(g[0] / std::exp(eta[0]));
    };
    OptimizerOptions oo;
    oo.gradient_tolerance = options.gradient_tolerance;
    oo.max_iterations = options.max_iterations;
    const OptimizerResult r = minimize_quasi_newton(f, {std::log(start)}, natural, oo);
    if (!std::isfinite(r.value)) {
        throw std::invalid_argument("objective is not finite at the starting point");
    }
    const double free_value = std::exp(r.x[0]);
    const ModelParams p = free_alpha ? ModelParams(free_value, fixed) : ModelParams(fixed, free_value);
    return make_result(p, t, -r.value, r.iterations, r.stopping_norm);
}

// Norm of the part of g orthogonal to the columns of M (2×r).
double projected_norm(const Vec2& g, const Matrix& m) {
    if (m.cols() >= 2) {
        return 0.0;
    }
    const double a = m(0, 0);
    const double b = m(1, 0);
    const double nn = a * a + b * b;
    if (nn == 0.0) {
        return std::hypot(g[0], g[1]);
    }
    const double c = (g[0] * a + g[1] * b) / nn;
    return std::hypot(g[0] - c * a, g[1] - c * b);
}

double norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return std::sqrt(acc);
}

EstimateResult fit_augmented_lagrangian(const Sample& s, TuningParam t, const ConstraintSpec& c,
                                        const ModelParams& start, const FitOptions& options) {
    const std::size_t r = c.rank();
    std::vector<double> lambda(r, 0.0);
    double mu = 10.0;
    std::vector<double> eta{std::log(start.alpha), std::log(start.beta)};
    std::size_t iterations = 0;
    double previous_violation = kInf;
    OptimizerOptions oo;
    oo.gradient_tolerance = options.gradient_tolerance;
    for (int outer = 0; outer < 40 && iterations < options.max_iterations; ++outer) {
        GradientObjective f = [&](std::span<const double> e, std::span<double> g) {
            Vec2 gt{};
            const double v = negative_objective(s, t, e[0], e[1], gt);
            if (!std::isfinite(v)) {
                return v;
            }
            const ModelParams p(std::exp(e[0]), std::exp(e[1]));
            std::vector<double> m;
            Matrix jac;
            try {
                m = c.value(p);
                jac = c.jacobian(p);
            } catch (const std::exception&) {
                return kInf;
            }
            double phi = v;
            Vec2 gn{-gt[0], -gt[1]};
            for (std::size_t j = 0; j < r; ++j) {
                const double w = lambda[j] + mu * m[j];
                phi += lambda[j] * m[j] + 0.5 * mu * m[j] * m[j];
                gn[0] += w * jac(0, j);
                gn[1] += w * jac(1, j);
            }
            g[0] = gn[0] * p.alpha;
            g[1] = gn[1] * p.beta;
            return phi;
        };
        StoppingNorm natural = [](std::span<const double> e, std::span<const double> g) {
            return std::hypot(g[0] / std::exp(e[0]), g[1] / std::exp(e[1]));
        };
        oo.max_iterations = options.max_iterations - iterations;
        const OptimizerResult res = minimize_quasi_newton(f, eta, natural, oo);
        iterations += res.iterations;
        if (!std::isfinite(res.value)) {
            break;
        }
        eta = res.x;
        const ModelParams p(std::exp(eta[0]), std::exp(eta[1]));
        const std::vector<double> m = c.value(p);
        const double violation = norm(m);
        if (violation < 1e-2 * kFeasibility && res.reached_tolerance) {
            break;
        }
        for (std::size_t j = 0; j < r; ++j) {
            lambda[j] += mu * m[j];
        }
        if (violation > 0.25 * previous_violation) {
            mu = std::min(mu * 10.0, 1e12);
        }
        previous_violation = violation;
    }
    const ModelParams p(std::exp(eta[0]), std::exp(eta[1]));
    const Evaluation ev = evaluate(s, t, p);
    const double violation = norm(c.value(p));
    EstimateResult result = make_result(p, t, ev.value, iterations, projected_norm(ev.gradient, c.jacobian(p)));
    if (!(violation < kFeasibility)) {
        result.converged = false;
        throw EstimationError("constraint could not be satisfied (|m| = " + std::to_string(violation) + ")",
                              result);
    }
    return result;
}

void require_converged(const EstimateResult& r) {
    if (!r.converged) {
        throw EstimationError("optimizer did not converge (gradient norm " + std::to_string(r.gradient_norm) +
                                  " after " + std::to_string(r.iterations) + " iterations)",
                              r);
    }
}

// Strict preference used across restarts: higher objective, then smaller
// (log α, log β).
bool better(const EstimateResult& a, const EstimateResult& b) {
    const double scale = 1e-12 * (1.0 + std::abs(b.objective_at_opt));
    if (a.objective_at_opt > b.objective_at_opt + scale) {
        return true;
    }
    if (a.objective_at_opt < b.objective_at_opt - scale) {
        return false;
    }
    return std::make_tuple(std::log(a.params.alpha), std::log(a.params.beta)) <
           std::make_tuple(std::log(b.params.alpha), std::log(b.params.beta));
}

constexpr std::array<std::array<double, 2>, 5> kStartOffsets{
    {{0.0, 0.0}, {0.2, 0.2}, {0.2, -0.2}, {-0.2, 0.2}, {-0.2, -0.2}}};

}  // namespace

ConstraintSpec ConstraintSpec::fix_alpha(double alpha0) {
    ConstraintSpec c(Kind::fix_alpha, 1);
    c.alpha0_ = ModelParams(alpha0, 1.0).alpha;
    return c;
}

ConstraintSpec ConstraintSpec::fix_beta(double beta0) {
    ConstraintSpec c(Kind::fix_beta, 1);
    c.beta0_ = ModelParams(1.0, beta0).beta;
    return c;
}

ConstraintSpec ConstraintSpec::fix_both(double alpha0, double beta0) {
    const ModelParams p(alpha0, beta0);
    ConstraintSpec c(Kind::fix_both, 2);
    c.alpha0_ = p.alpha;
    c.beta0_ = p.beta;
    return c;
}

ConstraintSpec ConstraintSpec::general(Function m, std::size_t r, std::optional<Jacobian> jacobian) {
    if (r != 1 && r != 2) {
        throw std::invalid_argument("constraint rank must be 1 or 2");
    }
    if (!m) {
        throw std::invalid_argument("constraint function is empty");
    }
    ConstraintSpec c(Kind::general, r);
    c.m_ = std::move(m);
    c.jacobian_ = std::move(jacobian);
    return c;
}

std::vector<double> ConstraintSpec::value(const ModelParams& p) const {
    switch (kind_) {
    case Kind::fix_alpha:
        return {p.alpha - alpha0_};
    case Kind::fix_beta:
        return {p.beta - beta0_};
    case Kind::fix_both:
        return {p.alpha - alpha0_, p.beta - beta0_};
    case Kind::general: {
        std::vector<double> v = m_(p);
        if (v.size() != r_) {
            throw std::invalid_argument("constraint function returned the wrong number of components");
        }
        return v;
    }
    }
    return {};
}

Matrix ConstraintSpec::jacobian(const ModelParams& p) const {
    switch (kind_) {
    case Kind::fix_alpha:
        return Matrix(2, 1, {1.0, 0.0});
    case Kind::fix_beta:
        return Matrix(2, 1, {0.0, 1.0});
    case Kind::fix_both:
        return Matrix::identity(2);
    case Kind::general:
        break;
    }
    if (jacobian_) {
        Matrix m = (*jacobian_)(p);
        if (m.rows() != 2 || m.cols() != r_) {
            throw std::invalid_argument("constraint Jacobian must be 2 x r");
        }
        return m;
    }
    Matrix m(2, r_);
    for (std::size_t i = 0; i < 2; ++i) {
        const double base = i == 0 ? p.alpha : p.beta;
        const double h = kFdStep * base;
        const ModelParams up = i == 0 ? ModelParams(base + h, p.beta) : ModelParams(p.alpha, base + h);
        const ModelParams dn = i == 0 ? ModelParams(base - h, p.beta) : ModelParams(p.alpha, base - h);
        const std::vector<double> vu = value(up);
        const std::vector<double> vd = value(dn);
        for (std::size_t j = 0; j < r_; ++j) {
            m(i, j) = (vu[j] - vd[j]) / (2.0 * h);
        }
    }
    return m;
}

ModelParams initial_guess(const Sample& s) {
    if (s.size() < 2) {
        throw std::invalid_argument("initial guess needs at least two observations");
    }
    std::vector<double> sorted(s.values().begin(), s.values().end());
    std::sort(sorted.begin(), sorted.end());
    const double q25 = quantile_type7(sorted, 0.25);
    const double median = quantile_type7(sorted, 0.5);
    const double q75 = quantile_type7(sorted, 0.75);
    if (!(q75 > q25)) {
        throw std::invalid_argument("initial guess: lower and upper quartiles coincide");
    }
    const double beta = std::clamp(2.0 * std::log(3.0) / (std::log(q75) - std::log(q25)), 0.1, 100.0);
    return {median, beta};
}

EstimateResult fit_mdpde(const Sample& s, TuningParam t, const FitOptions& options) {
    require_fit_data(s);
    const ModelParams base = options.init ? *options.init : initial_guess(s);
    if (!options.multistart) {
        EstimateResult r = fit_unrestricted_from(s, t, base, options);
        require_converged(r);
        return r;
    }
    std::optional<EstimateResult> best;
    std::optional<EstimateResult> best_failed;
    for (const auto& off : kStartOffsets) {
        const ModelParams start(base.alpha * std::exp(off[0]), base.beta * std::exp(off[1]));
        EstimateResult r = fit_unrestricted_from(s, t, start, options);
        auto& slot = r.converged ? best : best_failed;
        if (!slot || better(r, *slot)) {
            slot = r;
        }
    }
    if (!best) {
        require_converged(*best_failed);
    }
    return *best;
}

EstimateResult fit_restricted(const Sample& s, TuningParam t, const ConstraintSpec& c, const FitOptions& options) {
    require_fit_data(s);
    switch (c.kind()) {
    case ConstraintSpec::Kind::fix_both: {
        const ModelParams p(c.alpha0(), c.beta0());
        return {p, t, objective(s, p, t).value, 0, true, 0.0};
    }
    case ConstraintSpec::Kind::fix_alpha: {
        const double start = options.init ? options.init->beta : initial_guess(s).beta;
        EstimateResult r = fit_profile(s, t, false, c.alpha0(), start, options);
        require_converged(r);
        return r;
    }
    case ConstraintSpec::Kind::fix_beta: {
        const double start = options.init ? options.init->alpha : initial_guess(s).alpha;
        EstimateResult r = fit_profile(s, t, true, c.beta0(), start, options);
        require_converged(r);
        return r;
    }
    case ConstraintSpec::Kind::general:
        break;
    }
    const ModelParams start = options.init ? *options.init : initial_guess(s);
    EstimateResult r = fit_augmented_lagrangian(s, t, c, start, options);
    require_converged(r);
    return r;
}

}  // namespace lldpd
