#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "lldpd/estimation.hpp"

using namespace lldpd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Likelihood score sums written out from the density, independent of the
// library's stable evaluation.
std::array<double, 2> naive_score_sum(const Sample& s, double a, double b) {
    double sa = 0.0;
    double sb = 0.0;
    for (double x : s.values()) {
        const double xb = std::pow(x, b);
        const double ab = std::pow(a, b);
        sa += b / a * (xb - ab) / (xb + ab);
        sb += 1.0 / b + std::log(x / a) * (ab - xb) / (ab + xb);
    }
    return {sa, sb};
}

// Newton iteration on the likelihood equations with a finite-difference
// Jacobian; a separate solver for the maximum likelihood estimate.
std::array<double, 2> newton_mle(const Sample& s, double a, double b) {
    for (int it = 0; it < 100; ++it) {
        const auto g = naive_score_sum(s, a, b);
        const double ha = 1e-6 * a;
        const double hb = 1e-6 * b;
        const auto ga1 = naive_score_sum(s, a + ha, b);
        const auto ga0 = naive_score_sum(s, a - ha, b);
        const auto gb1 = naive_score_sum(s, a, b + hb);
        const auto gb0 = naive_score_sum(s, a, b - hb);
        const double j11 = (ga1[0] - ga0[0]) / (2 * ha);
        const double j21 = (ga1[1] - ga0[1]) / (2 * ha);
        const double j12 = (gb1[0] - gb0[0]) / (2 * hb);
        const double j22 = (gb1[1] - gb0[1]) / (2 * hb);
        const double det = j11 * j22 - j12 * j21;
        const double da = (j22 * g[0] - j12 * g[1]) / det;
        const double db = (-j21 * g[0] + j11 * g[1]) / det;
        a -= da;
        b -= db;
        if (std::abs(da) < 1e-14 * a && std::abs(db) < 1e-14 * b) {
            break;
        }
    }
    return {a, b};
}

Sample draws(std::size_t n, const ModelParams& p, std::uint64_t seed) {
    RandomStream rng(seed);
    return sample(n, p, rng);
}

}  // namespace

TEST_CASE("initial guess inverts the quartile formula", "[estimation]") {
    const ModelParams p(1.0, 5.0);
    const Sample s({quantile(0.1, p), quantile(0.25, p), quantile(0.5, p), quantile(0.75, p), quantile(0.9, p)});
    const ModelParams g = initial_guess(s);
    CHECK_THAT(g.alpha, WithinRel(1.0, 1e-14));
    CHECK_THAT(g.beta, WithinRel(5.0, 1e-12));
}

TEST_CASE("initial guess on a large sample", "[estimation]") {
    const ModelParams g = initial_guess(draws(10000, ModelParams(1.0, 5.0), 11));
    CHECK(std::abs(g.alpha - 1.0) < 0.05);
    CHECK(std::abs(g.beta - 5.0) < 0.5);
}

TEST_CASE("initial guess errors", "[estimation]") {
    CHECK_THROWS_AS(initial_guess(Sample({1.0, 2.0, 2.0, 2.0, 2.0, 3.0})), std::invalid_argument);
    CHECK_THROWS_AS(initial_guess(Sample({1.0})), std::invalid_argument);
    CHECK(initial_guess(Sample({1.0, 1.0 + 1e-9, 1.0 + 2e-9, 1.0 + 3e-9, 1.0 + 4e-9})).beta == 100.0);
    CHECK(initial_guess(Sample({1e-8, 1e-4, 1.0, 1e4, 1e8})).beta == Catch::Approx(2.0 * std::log(3.0) / std::log(1e8)));
}

TEST_CASE("maximum likelihood on 10^4 draws is consistent", "[estimation]") {
    const EstimateResult r = fit_mdpde(draws(10000, ModelParams(1.0, 5.0), 5), TuningParam(0.0));
    CHECK(r.converged);
    CHECK(r.gradient_norm < 1e-6);
    CHECK(std::abs(r.params.alpha - 1.0) < 0.03);
    CHECK(std::abs(r.params.beta - 5.0) < 0.15);
}

TEST_CASE("tau = 0 agrees with an independent likelihood solver", "[estimation]") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Sample s = draws(400, ModelParams(2.0, 3.0), seed);
        const EstimateResult r = fit_mdpde(s, TuningParam(0.0));
        const auto ref = newton_mle(s, 1.5, 2.5);
        CHECK_THAT(r.params.alpha, WithinAbs(ref[0], 1e-6));
        CHECK_THAT(r.params.beta, WithinAbs(ref[1], 1e-6));
        const auto res = naive_score_sum(s, r.params.alpha, r.params.beta);
        CHECK(std::hypot(res[0], res[1]) < 1e-6);
    }
}

TEST_CASE("estimates are scale equivariant", "[estimation]") {
    const Sample s = draws(300, ModelParams(1.0, 5.0), 21);
    for (double tau : {0.0, 0.5, 1.0}) {
        const EstimateResult r1 = fit_mdpde(s, TuningParam(tau));
        const EstimateResult r2 = fit_mdpde(s.scaled(2.0), TuningParam(tau));
        CHECK_THAT(r2.params.alpha, WithinRel(2.0 * r1.params.alpha, 1e-8));
        CHECK_THAT(r2.params.beta, WithinRel(r1.params.beta, 1e-8));
    }
}

TEST_CASE("fit improves on the initial guess", "[estimation]") {
    const Sample s = draws(150, ModelParams(0.7, 2.0), 8);
    for (double tau : {0.0, 0.25, 1.0}) {
        const TuningParam t(tau);
        const EstimateResult r = fit_mdpde(s, t);
        CHECK(r.objective_at_opt >= objective(s, initial_guess(s), t).value);
        CHECK(r.objective_at_opt == objective(s, r.params, t).value);
        CHECK(r.tau == t);
    }
}

TEST_CASE("multistart is deterministic and at least as good", "[estimation]") {
    const Sample s = draws(200, ModelParams(1.0, 5.0), 4);
    FitOptions o;
    o.multistart = true;
    const EstimateResult single = fit_mdpde(s, TuningParam(0.5));
    const EstimateResult multi = fit_mdpde(s, TuningParam(0.5), o);
    const EstimateResult again = fit_mdpde(s, TuningParam(0.5), o);
    CHECK(multi.objective_at_opt >= single.objective_at_opt - 1e-12);
    CHECK(multi.params == again.params);
    CHECK_THAT(multi.params.alpha, WithinRel(single.params.alpha, 1e-7));
}

TEST_CASE("degenerate inputs are rejected", "[estimation]") {
    CHECK_THROWS_AS(fit_mdpde(Sample({2.0, 2.0, 2.0}), TuningParam(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(fit_mdpde(Sample({2.0}), TuningParam(0.0)), std::invalid_argument);
    CHECK_THROWS_AS(fit_restricted(Sample({2.0, 2.0}), TuningParam(0.0), ConstraintSpec::fix_beta(1.0)),
                    std::invalid_argument);
}

TEST_CASE("iteration cap raises with the best iterate", "[estimation]") {
    FitOptions o;
    o.max_iterations = 1;
    o.init = ModelParams(5.0, 1.0);
    const Sample s = draws(200, ModelParams(1.0, 5.0), 2);
    try {
        (void)fit_mdpde(s, TuningParam(0.0), o);
        FAIL("expected EstimationError");
    } catch (const EstimationError& e) {
        CHECK_FALSE(e.best().converged);
        CHECK(e.best().iterations <= 1);
        CHECK(e.best().objective_at_opt >= objective(s, ModelParams(5.0, 1.0), TuningParam(0.0)).value);
    }
}

TEST_CASE("restricted fits", "[estimation][restricted]") {
    const Sample s = draws(10000, ModelParams(1.0, 5.0), 13);
    const TuningParam t(0.5);

    SECTION("a point null needs no search") {
        const EstimateResult r = fit_restricted(s, t, ConstraintSpec::fix_both(1.1, 4.0));
        CHECK(r.params == ModelParams(1.1, 4.0));
        CHECK(r.iterations == 0);
        CHECK(r.objective_at_opt == objective(s, ModelParams(1.1, 4.0), t).value);
    }
    SECTION("fixed shape stays close to the full estimate") {
        const EstimateResult full = fit_mdpde(s, t);
        const EstimateResult r = fit_restricted(s, t, ConstraintSpec::fix_beta(5.0));
        CHECK(r.params.beta == 5.0);
        CHECK(std::abs(r.params.alpha - full.params.alpha) < 0.05);
        CHECK(std::abs(objective_gradient(s, r.params, t)[0]) < 1e-6);
    }
    SECTION("general constraint reproduces the profile fit") {
        const EstimateResult profile = fit_restricted(s, t, ConstraintSpec::fix_beta(5.0));
        const auto m = [](const ModelParams& p) { return std::vector<double>{p.beta - 5.0}; };
        const EstimateResult fd = fit_restricted(s, t, ConstraintSpec::general(m, 1));
        const EstimateResult an = fit_restricted(
            s, t, ConstraintSpec::general(m, 1, [](const ModelParams&) { return Matrix(2, 1, {0.0, 1.0}); }));
        for (const EstimateResult* r : {&fd, &an}) {
            CHECK_THAT(r->params.alpha, WithinAbs(profile.params.alpha, 1e-6));
            CHECK_THAT(r->params.beta, WithinAbs(5.0, 1e-8));
            CHECK(r->converged);
        }
    }
    SECTION("fixed scale") {
        const EstimateResult r = fit_restricted(s, t, ConstraintSpec::fix_alpha(1.0));
        CHECK(r.params.alpha == 1.0);
        CHECK(std::abs(r.params.beta - 5.0) < 0.2);
    }
}

TEST_CASE("nonlinear constraint satisfies the optimality conditions", "[estimation][restricted]") {
    const Sample s = draws(500, ModelParams(1.0, 5.0), 31);
    const TuningParam t(0.25);
    const auto c = ConstraintSpec::general(
        [](const ModelParams& p) { return std::vector<double>{p.alpha * p.beta - 6.0}; }, 1);
    const EstimateResult r = fit_restricted(s, t, c);
    CHECK(std::abs(r.params.alpha * r.params.beta - 6.0) < 1e-8);
    // ∇H is parallel to ∇m = (β, α).
    const Vec2 g = objective_gradient(s, r.params, t);
    CHECK(std::abs(g[0] * r.params.alpha - g[1] * r.params.beta) < 1e-6);
    CHECK(r.gradient_norm < 1e-6);
    const ModelParams nearby(r.params.alpha * 1.01, 6.0 / (r.params.alpha * 1.01));
    CHECK(r.objective_at_opt >= objective(s, nearby, t).value);
}

TEST_CASE("constraint validation", "[estimation][restricted]") {
    CHECK_THROWS(ConstraintSpec::fix_beta(-1.0));
    CHECK_THROWS(ConstraintSpec::general([](const ModelParams&) { return std::vector<double>{0.0}; }, 3));
    const auto c = ConstraintSpec::general([](const ModelParams& p) { return std::vector<double>{p.alpha, p.beta}; }, 1);
    CHECK_THROWS(c.value(ModelParams(1.0, 1.0)));
    const auto sq = ConstraintSpec::general([](const ModelParams& p) { return std::vector<double>{p.alpha * p.alpha}; }, 1);
    CHECK_THAT(sq.jacobian(ModelParams(3.0, 1.0))(0, 0), WithinAbs(6.0, 1e-8));
    const auto infeasible =
        ConstraintSpec::general([](const ModelParams& p) { return std::vector<double>{p.alpha * p.alpha + 1.0}; }, 1);
    CHECK_THROWS_AS(fit_restricted(draws(100, ModelParams(1.0, 5.0), 3), TuningParam(0.0), infeasible),
                    EstimationError);
}

TEST_CASE("estimation error shrinks with the sample size", "[estimation][monte_carlo]") {
    for (double tau : {0.0, 0.5, 1.0}) {
        double mae_small = 0.0;
        double mae_large = 0.0;
        for (std::uint64_t rep = 0; rep < 200; ++rep) {
            RandomStream r1 = RandomStream::derived(100, 50, rep);
            RandomStream r2 = RandomStream::derived(100, 500, rep);
            mae_small += std::abs(fit_mdpde(sample(50, ModelParams(1.0, 5.0), r1), TuningParam(tau)).params.alpha - 1.0);
            mae_large += std::abs(fit_mdpde(sample(500, ModelParams(1.0, 5.0), r2), TuningParam(tau)).params.alpha - 1.0);
        }
        CHECK(mae_large < mae_small);
    }
}

TEST_CASE("tau one beats tau zero in 90 percent of contaminated replicates", "[estimation][monte_carlo]") {
    int better = 0;
    for (std::uint64_t rep = 0; rep < 200; ++rep) {
        RandomStream rng = RandomStream::derived(200, 1, rep);
        std::vector<double> v;
        for (int i = 0; i < 90; ++i) {
            v.push_back(quantile(rng.uniform_open(), ModelParams(1.0, 5.0)));
        }
        for (int i = 0; i < 10; ++i) {
            v.push_back(quantile(rng.uniform_open(), ModelParams(3.0, 5.0)));
        }
        const Sample s(std::move(v));
        const double e0 = std::abs(fit_mdpde(s, TuningParam(0.0)).params.alpha - 1.0);
        const double e1 = std::abs(fit_mdpde(s, TuningParam(1.0)).params.alpha - 1.0);
        better += e1 < e0 ? 1 : 0;
    }
    CHECK(better >= 180);
}

TEST_CASE("restricted estimate is nearly unbiased under the null", "[estimation][monte_carlo]") {
    for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        double bias = 0.0;
        const int reps = 100;
        for (int rep = 0; rep < reps; ++rep) {
            RandomStream rng = RandomStream::derived(300, 500, static_cast<std::uint64_t>(rep));
            const Sample s = sample(500, ModelParams(1.0, 5.0), rng);
            bias += fit_restricted(s, TuningParam(tau), ConstraintSpec::fix_beta(5.0)).params.alpha - 1.0;
        }
        CHECK(std::abs(bias / reps) < 0.02);
    }
}
