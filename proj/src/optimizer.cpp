#include "lldpd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lldpd {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

struct Point {
    std::vector<double> x;
    double value;
    std::vector<double> grad;
};

Point evaluate(const GradientObjective& f, std::vector<double> x) {
    std::vector<double> g(x.size(), 0.0);
    const double v = f(x, g);
    return {std::move(x), std::isfinite(v) ? v : std::numeric_limits<double>::infinity(), std::move(g)};
}

bool finite_gradient(const Point& p) {
    return std::all_of(p.grad.begin(), p.grad.end(), [](double g) { return std::isfinite(g); });
}

OptimizerResult to_result(const Point& p, const StoppingNorm& stop, std::size_t iterations, bool simplex,
                          double tolerance) {
    const double sn = stop(p.x, p.grad);
    return {p.x, p.value, p.grad, sn, iterations, sn <= tolerance, simplex};
}

// Runs BFGS from `start`; returns the final point and whether the line
// search broke down before convergence.
struct BfgsRun {
    Point point;
    std::size_t iterations;
    bool line_search_failed;
};

BfgsRun run_bfgs(const GradientObjective& f, Point current, const StoppingNorm& stop,
                 const OptimizerOptions& options, std::size_t budget) {
    const std::size_t d = current.x.size();
    std::vector<double> h(d * d, 0.0);  // inverse Hessian approximation
    auto reset = [&] {
        std::fill(h.begin(), h.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            h[i * d + i] = 1.0;
        }
    };
    reset();
    bool scaled = false;
    std::size_t it = 0;
    std::vector<double> dir(d);
    while (it < budget) {
        if (stop(current.x, current.grad) <= options.gradient_tolerance) {
            return {current, it, false};
        }
        for (std::size_t i = 0; i < d; ++i) {
            dir[i] = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                dir[i] -= h[i * d + j] * current.grad[j];
            }
        }
        double slope = dot(current.grad, dir);
        if (!(slope < 0.0)) {
            reset();
            scaled = false;
            for (std::size_t i = 0; i < d; ++i) {
                dir[i] = -current.grad[i];
            }
            slope = dot(current.grad, dir);
        }
        double step = std::min(1.0, options.max_step / std::max(norm(dir), 1e-300));
        bool accepted = false;
        Point trial;
        const double gnorm = norm(current.grad);
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            std::vector<double> x(d);
            for (std::size_t i = 0; i < d; ++i) {
                x[i] = current.x[i] + step * dir[i];
            }
            trial = evaluate(f, std::move(x));
            if (std::isfinite(trial.value) && finite_gradient(trial)) {
                const bool armijo = trial.value <= current.value + kArmijo * step * slope;
                // Near the optimum, function differences drown in roundoff;
                // accept a step that keeps f flat and shrinks the gradient.
                const bool flat = trial.value <= current.value + 1e-14 * (1.0 + std::abs(current.value)) &&
                                  norm(trial.grad) < gnorm;
                if (armijo || flat) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        ++it;
        if (!accepted) {
            return {current, it, true};
        }
        std::vector<double> s(d);
        std::vector<double> y(d);
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = trial.x[i] - current.x[i];
            y[i] = trial.grad[i] - current.grad[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-300) {
            if (!scaled) {
                const double gamma = sy / dot(y, y);
                for (double& v : h) {
                    v *= gamma;
                }
                scaled = true;
            }
            // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ
            const double rho = 1.0 / sy;
            std::vector<double> hy(d, 0.0);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    hy[i] += h[i * d + j] * y[j];
                }
            }
            const double yhy = dot(y, hy);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    h[i * d + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        current = std::move(trial);
    }
    return {current, it, false};
}

}  // namespace

OptimizerResult minimize_simplex(const GradientObjective& f, std::vector<double> x0, double initial_step,
                                 const StoppingNorm& stopping_norm, const OptimizerOptions& options) {
    const std::size_t d = x0.size();
    std::vector<Point> simplex;
    simplex.push_back(evaluate(f, x0));
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> x = x0;
        x[i] += initial_step;
        simplex.push_back(evaluate(f, std::move(x)));
    }
    auto by_value = [](const Point& a, const Point& b) { return a.value < b.value; };
    auto combine = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double coef) {
        std::vector<double> x(d);
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = centroid[i] + coef * (worst[i] - centroid[i]);
        }
        return evaluate(f, std::move(x));
    };
    std::size_t it = 0;
    while (it < options.max_iterations) {
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
        double diameter = 0.0;
        for (std::size_t i = 1; i <= d; ++i) {
            double dist2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = simplex[i].x[k] - simplex[0].x[k];
                dist2 += diff * diff;
            }
            diameter = std::max(diameter, std::sqrt(dist2));
        }
        if (diameter < options.simplex_tolerance) {
            break;
        }
        ++it;
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                centroid[k] += simplex[i].x[k] / static_cast<double>(d);
            }
        }
        Point& worst = simplex[d];
        Point reflected = combine(centroid, worst.x, -1.0);
        if (reflected.value < simplex[0].value) {
            Point expanded = combine(centroid, worst.x, -2.0);
            worst = expanded.value < reflected.value ? std::move(expanded) : std::move(reflected);
        } else if (reflected.value < simplex[d - 1].value) {
            worst = std::move(reflected);
        } else {
            const bool outside = reflected.value < worst.value;
            Point contracted = combine(centroid, worst.x, outside ? -0.5 : 0.5);
            if (contracted.value < std::min(worst.value, reflected.value)) {
                worst = std::move(contracted);
            } else {
                for (std::size_t i = 1; i <= d; ++i) {
                    std::vector<double> x(d);
                    for (std::size_t k = 0; k < d; ++k) {
                        x[k] = simplex[0].x[k] + 0.5 * (simplex[i].x[k] - simplex[0].x[k]);
                    }
                    simplex[i] = evaluate(f, std::move(x));
                }
            }
        }
    }
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    return to_result(simplex[0], stopping_norm, it, true, options.gradient_tolerance);
}

OptimizerResult minimize_quasi_newton(const GradientObjective& f, std::vector<double> x0,
                                      const StoppingNorm& stopping_norm, const OptimizerOptions& options) {
    Point start = evaluate(f, std::move(x0));
    if (!std::isfinite(start.value) || !finite_gradient(start)) {
        OptimizerResult failed = to_result(start, stopping_norm, 0, false, options.gradient_tolerance);
        failed.reached_tolerance = false;
        return failed;
    }
    BfgsRun run = run_bfgs(f, std::move(start), stopping_norm, options, options.max_iterations);
    if (!run.line_search_failed) {
        return to_result(run.point, stopping_norm, run.iterations, false, options.gradient_tolerance);
    }
    std::size_t used = run.iterations;
    OptimizerOptions simplex_options = options;
    simplex_options.max_iterations = options.max_iterations - std::min(used, options.max_iterations);
    OptimizerResult nm = minimize_simplex(f, run.point.x, 0.05, stopping_norm, simplex_options);
    used += nm.iterations;
    Point polished = evaluate(f, nm.x);
    if (used < options.max_iterations && finite_gradient(polished)) {
        BfgsRun retry = run_bfgs(f, polished, stopping_norm, options, options.max_iterations - used);
        used += retry.iterations;
        if (retry.point.value <= polished.value) {
            polished = std::move(retry.point);
        }
    }
    Point best = polished.value <= run.point.value ? std::move(polished) : std::move(run.point);
    return to_result(best, stopping_norm, used, true, options.gradient_tolerance);
}

}  // namespace lldpd
