#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <type_traits>

#include "lldpd/quadrature.hpp"
#include "lldpd/rao_tests.hpp"

using namespace lldpd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kPi2 = std::numbers::pi * std::numbers::pi;

Sample draws(std::size_t n, const ModelParams& p, std::uint64_t cell, std::uint64_t rep) {
    RandomStream rng = RandomStream::derived(777, cell, rep);
    return sample(n, p, rng);
}

std::array<double, 2> mean_score(const Sample& s, const ModelParams& p) {
    double a = 0.0;
    double b = 0.0;
    for (double x : s.values()) {
        a += score_alpha(x, p);
        b += score_beta(x, p);
    }
    return {a / static_cast<double>(s.size()), b / static_cast<double>(s.size())};
}

}  // namespace

TEST_CASE("simple tests take no estimation inputs", "[rao]") {
    using AlphaSig = TestOutcome (*)(const Sample&, double, double, TuningParam, const RaoOptions&);
    using FullSig = TestOutcome (*)(const Sample&, const ModelParams&, TuningParam, const RaoOptions&);
    STATIC_CHECK(std::is_same_v<decltype(&rao_simple_alpha), AlphaSig>);
    STATIC_CHECK(std::is_same_v<decltype(&rao_simple_beta), AlphaSig>);
    STATIC_CHECK(std::is_same_v<decltype(&rao_simple_full), FullSig>);
}

TEST_CASE("scores at tau = 0 are the likelihood scores", "[rao]") {
    const ModelParams p(1.3, 2.0);
    for (double x : {0.1, 1.0, 4.0}) {
        CHECK_THAT(u_alpha(x, p, TuningParam(0.0)), WithinAbs(score_alpha(x, p), 1e-15));
        CHECK_THAT(u_beta(x, p, TuningParam(0.0)), WithinAbs(score_beta(x, p), 1e-15));
    }
}

TEST_CASE("alpha centering against quadrature", "[rao]") {
    const ModelParams p(1.0, 5.0);
    const double tau = 0.5;
    auto f = [&](double t) {
        const double x = t / (1.0 - t);
        return std::array<double, 1>{score_alpha(x, p) * std::exp((1.0 + tau) * log_pdf(x, p)) /
                                     ((1.0 - t) * (1.0 - t))};
    };
    const double xi_alpha = integrate<1>(f, 0.0, 1.0).value[0];
    CHECK_THAT(u_alpha(1.0, p, TuningParam(tau)), WithinAbs(-xi_alpha, 1e-8));
    CHECK(u_alpha(1.0, p, TuningParam(tau)) > 0.0);
}

TEST_CASE("beta centering is the derivative of the integral term", "[rao]") {
    const ModelParams p(1.0, 5.0);
    for (double tau : {0.25, 0.5, 1.0}) {
        const TuningParam t(tau);
        const double h = 1e-5;
        const double fd = (integral_term(ModelParams(1.0, 5.0 + h), t) - integral_term(ModelParams(1.0, 5.0 - h), t)) /
                          (2.0 * h) / (1.0 + tau);
        CHECK_THAT(beta_score_centering(p, t), WithinAbs(fd, 1e-6));
    }
}

TEST_CASE("DPD scores have mean zero under the model", "[rao][monte_carlo]") {
    const ModelParams p(1.0, 5.0);
    const TuningParam t(0.5);
    const ScoreEvaluator eval(p, t);
    RandomStream rng(99);
    const std::size_t n = 1000000;
    double sa = 0.0;
    double sa2 = 0.0;
    double sb = 0.0;
    double sb2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const DPDScore u = eval(quantile(rng.uniform_open(), p));
        sa += u.u_alpha;
        sa2 += u.u_alpha * u.u_alpha;
        sb += u.u_beta;
        sb2 += u.u_beta * u.u_beta;
    }
    const double dn = static_cast<double>(n);
    const double ma = sa / dn;
    const double mb = sb / dn;
    CHECK(std::abs(ma) < 3.0 * std::sqrt((sa2 / dn - ma * ma) / dn));
    CHECK(std::abs(mb) < 3.0 * std::sqrt((sb2 / dn - mb * mb) / dn));
}

TEST_CASE("symmetric two-point sample has zero alpha score", "[rao]") {
    const Sample s({std::exp(-0.3), std::exp(0.3)});
    const TestOutcome o = rao_simple_alpha(s, 1.0, 5.0, TuningParam(0.0));
    CHECK_THAT(o.statistic, WithinAbs(0.0, 1e-28));
    CHECK(o.p_value == Catch::Approx(1.0));
}

TEST_CASE("tau = 0 tests equal the classical score tests", "[rao]") {
    const ModelParams null(1.0, 5.0);
    const double i11 = 25.0 / 3.0;
    const double i22 = (3.0 + kPi2) / 225.0;
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        const Sample s = draws(120, ModelParams(1.03, 5.3), 1, rep);
        const auto u = mean_score(s, null);
        const double n = static_cast<double>(s.size());
        CHECK_THAT(rao_simple_alpha(s, 1.0, 5.0, TuningParam(0.0)).statistic, WithinRel(n * u[0] * u[0] / i11, 1e-10));
        CHECK_THAT(rao_simple_beta(s, 5.0, 1.0, TuningParam(0.0)).statistic, WithinRel(n * u[1] * u[1] / i22, 1e-10));
        CHECK_THAT(rao_simple_full(s, null, TuningParam(0.0)).statistic,
                   WithinRel(n * (u[0] * u[0] / i11 + u[1] * u[1] / i22), 1e-10));
    }
}

TEST_CASE("tau = 0 composite test equals the classical restricted score test", "[rao]") {
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        const Sample s = draws(200, ModelParams(1.0, 5.4), 2, rep);
        const TestOutcome o = rao_composite(s, ConstraintSpec::fix_beta(5.0), TuningParam(0.0));
        const EstimateResult r = fit_restricted(s, TuningParam(0.0), ConstraintSpec::fix_beta(5.0));
        const auto u = mean_score(s, r.params);
        const double i11 = 25.0 / (3.0 * r.params.alpha * r.params.alpha);
        const double i22 = (3.0 + kPi2) / 225.0;
        const double n = static_cast<double>(s.size());
        CHECK(std::abs(u[0]) < 1e-9);
        CHECK_THAT(o.statistic, WithinRel(n * (u[0] * u[0] / i11 + u[1] * u[1] / i22), 1e-7));
        CHECK(o.df == 1);
    }
}

TEST_CASE("composite test on a point null is the simple full test", "[rao]") {
    const Sample s = draws(150, ModelParams(1.1, 4.5), 3, 0);
    for (double tau : {0.0, 0.5}) {
        const TestOutcome a = rao_composite(s, ConstraintSpec::fix_both(1.0, 5.0), TuningParam(tau));
        const TestOutcome b = rao_simple_full(s, ModelParams(1.0, 5.0), TuningParam(tau));
        CHECK_THAT(a.statistic, WithinRel(b.statistic, 1e-12));
        CHECK(a.df == 2);
    }
}

TEST_CASE("full test calibration", "[rao][monte_carlo]") {
    std::vector<double> stats;
    for (std::uint64_t rep = 0; rep < 2000; ++rep) {
        stats.push_back(rao_simple_full(draws(200, ModelParams(1.0, 5.0), 10, rep), ModelParams(1.0, 5.0),
                                        TuningParam(0.5)).statistic);
    }
    std::sort(stats.begin(), stats.end());
    const double q95 = stats[static_cast<std::size_t>(0.95 * 2000) - 1];
    CHECK(q95 >= 5.0);
    CHECK(q95 <= 7.0);
}

TEST_CASE("beta-only test calibration", "[rao][monte_carlo]") {
    for (double tau : {0.0, 0.5}) {
        int rejections = 0;
        for (std::uint64_t rep = 0; rep < 2000; ++rep) {
            rejections += rao_simple_beta(draws(200, ModelParams(1.0, 5.0), 11, rep), 5.0, 1.0, TuningParam(tau))
                              .rejects(0.05);
        }
        CHECK(rejections / 2000.0 >= 0.03);
        CHECK(rejections / 2000.0 <= 0.08);
    }
}

TEST_CASE("composite shape test has power", "[rao][monte_carlo]") {
    int power = 0;
    for (std::uint64_t rep = 0; rep < 500; ++rep) {
        power += rao_composite(draws(200, ModelParams(1.0, 7.0), 12, rep), ConstraintSpec::fix_beta(5.0),
                               TuningParam(0.0)).rejects(0.05);
    }
    CHECK(power / 500.0 >= 0.9);
}
