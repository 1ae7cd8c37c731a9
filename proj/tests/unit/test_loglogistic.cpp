#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <stdexcept>

#include "lldpd/loglogistic.hpp"
#include "lldpd/quadrature.hpp"

using namespace lldpd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Direct transcription of the density, used as an independent oracle.
double naive_pdf(double x, double a, double b) {
    const double xb = std::pow(x, b);
    const double ab = std::pow(a, b);
    return b * ab * std::pow(x, b - 1.0) / ((xb + ab) * (xb + ab));
}

}  // namespace

TEST_CASE("parameters and samples are validated", "[model]") {
    CHECK_THROWS_AS(ModelParams(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(1.0, -2.0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(1.0, INFINITY), std::domain_error);
    CHECK_THROWS(Sample({}));
    CHECK_THROWS(Sample({1.0, -1.0}));
    CHECK_THROWS(Sample({1.0, NAN}));
    const Sample s({1.0, 2.0});
    CHECK(s.scaled(3.0)[1] == 6.0);
}

TEST_CASE("density matches the textbook formula", "[model]") {
    for (double a : {0.5, 1.0, 3.0}) {
        for (double b : {0.8, 2.0, 5.0, 10.0}) {
            const ModelParams p(a, b);
            for (double x : {0.05, 0.3, 1.0, 2.5, 9.0}) {
                CHECK_THAT(pdf(x, p), WithinRel(naive_pdf(x, a, b), 1e-12));
                CHECK_THAT(log_pdf(x, p), WithinAbs(std::log(naive_pdf(x, a, b)), 1e-12));
            }
        }
    }
}

TEST_CASE("density integrates to one", "[model]") {
    const ModelParams p(1.3, 2.5);
    // x = t / (1 − t) maps (0, 1) onto (0, ∞).
    auto f = [&](double t) {
        const double x = t / (1.0 - t);
        return std::array<double, 1>{pdf(x, p) / ((1.0 - t) * (1.0 - t))};
    };
    CHECK_THAT(integrate<1>(f, 0.0, 1.0).value[0], WithinAbs(1.0, 1e-10));
}

TEST_CASE("cdf, quantile and median", "[model]") {
    const ModelParams p(2.0, 4.0);
    CHECK_THAT(cdf(2.0, p), WithinAbs(0.5, 1e-16));
    CHECK_THAT(quantile(0.5, p), WithinRel(2.0, 1e-15));
    for (double u : {1e-12, 0.01, 0.3, 0.75, 0.999999}) {
        CHECK_THAT(cdf(quantile(u, p), p), WithinRel(u, 1e-12));
    }
    CHECK_THAT(quantile(0.75, p) / quantile(0.25, p), WithinRel(std::pow(3.0, 2.0 / 4.0), 1e-14));
    CHECK(cdf(INFINITY, p) == 1.0);
    CHECK_THROWS(quantile(0.0, p));
    CHECK_THROWS(quantile(1.0, p));
}

TEST_CASE("scores are derivatives of the log density", "[model]") {
    for (double x : {0.2, 0.9, 1.0, 1.7, 6.0}) {
        const double a = 1.4;
        const double b = 3.0;
        const double h = 1e-6;
        const double fa = (log_pdf(x, ModelParams(a + h, b)) - log_pdf(x, ModelParams(a - h, b))) / (2.0 * h);
        const double fb = (log_pdf(x, ModelParams(a, b + h)) - log_pdf(x, ModelParams(a, b - h))) / (2.0 * h);
        CHECK_THAT(score_alpha(x, ModelParams(a, b)), WithinAbs(fa, 1e-7));
        CHECK_THAT(score_beta(x, ModelParams(a, b)), WithinAbs(fb, 1e-7));
    }
    CHECK_THROWS(score_alpha(0.0, ModelParams(1.0, 1.0)));
}

TEST_CASE("extreme observations stay finite", "[model]") {
    const ModelParams p(1.0, 10.0);
    for (double x : {1e-300, 1e-30, 1e30, 1e300}) {
        CHECK(std::isfinite(log_pdf(x, p)));
        CHECK(std::isfinite(score_alpha(x, p)));
        CHECK(std::isfinite(score_beta(x, p)));
    }
}

TEST_CASE("random streams are deterministic and well spread", "[model][rng]") {
    RandomStream a = RandomStream::derived(1, 2, 3);
    RandomStream b = RandomStream::derived(1, 2, 3);
    RandomStream c = RandomStream::derived(1, 2, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double ua = a.uniform_open();
        CHECK(ua == b.uniform_open());
        CHECK(ua > 0.0);
        CHECK(ua < 1.0);
        differs = differs || ua != c.uniform_open();
    }
    CHECK(differs);
    RandomStream r(9);
    std::array<int, 5> counts{};
    for (int i = 0; i < 50000; ++i) {
        const auto k = r.uniform_index(5);
        REQUIRE(k < 5);
        ++counts[k];
    }
    for (int cnt : counts) {
        CHECK(std::abs(cnt - 10000) < 500);
    }
    CHECK(mix64(0) != mix64(1));
}

TEST_CASE("sampling reproduces the population law", "[model][rng]") {
    const ModelParams p(1.0, 5.0);
    RandomStream rng(2024);
    const Sample s = sample(20000, p, rng);
    // E log X = log α, Var log X = π² / (3 β²).
    double mean = 0.0;
    for (double x : s.values()) {
        mean += std::log(x);
    }
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double x : s.values()) {
        var += (std::log(x) - mean) * (std::log(x) - mean);
    }
    var /= static_cast<double>(s.size() - 1);
    const double sd = std::sqrt(M_PI * M_PI / 75.0);
    CHECK(std::abs(mean) < 4.0 * sd / std::sqrt(20000.0));
    CHECK_THAT(var, WithinRel(sd * sd, 0.05));
}
