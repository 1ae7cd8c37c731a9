#include "lldpd/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <tuple>

#include "lldpd/special_functions.hpp"

namespace lldpd {

namespace {

// [J11, J12, J22, xi_a, xi_b] at tuning constant tau.
using Moments = std::array<double, 5>;

Moments score_moments(const ModelParams& p, double tau, const QuadratureOptions& options) {
    // The beta-function precondition is the integrability condition for f^{1+τ}.
    integral_beta_arguments(p, TuningParam(tau));
    const double log_scale = std::log(p.beta / p.alpha);
    const double pow_lo = 1.0 - 1.0 / p.beta;
    const double pow_hi = 1.0 + 1.0 / p.beta;
    auto integrand = [&](double u) -> Moments {
        const double log_u = std::log(u);
        const double log_1mu = std::log1p(-u);
        const double centred = 2.0 * u - 1.0;
        const double s_a = p.beta / p.alpha * centred;
        const double s_b = -(log_u - log_1mu) * centred / p.beta + 1.0 / p.beta;
        const double weight =
            tau == 0.0 ? 1.0 : std::exp(tau * (log_scale + pow_lo * log_u + pow_hi * log_1mu));
        return {s_a * s_a * weight, s_a * s_b * weight, s_b * s_b * weight, s_a * weight, s_b * weight};
    };
    return integrate<5>(integrand, 0.0, 1.0, options).value;
}

Matrix j_from(const Moments& m) {
    return Matrix::symmetric2(m[0], m[1], m[2]);
}

Matrix k_from(const Matrix& j_double, const Vec2& xi) {
    return Matrix::symmetric2(j_double(0, 0) - xi[0] * xi[0], j_double(0, 1) - xi[0] * xi[1],
                              j_double(1, 1) - xi[1] * xi[1]);
}

// Arguments of the beta and digamma terms in the printed expressions.
struct PrintedArgs {
    double a;  // (τβ + τ + β)/β
    double b;  // (τβ − τ + β)/β
    double c;  // (τβ + 2β − τ)/β
    double d;  // (τβ + 3β − τ)/β
    double e;  // (τβ + 2β + τ)/β
};

PrintedArgs printed_args(const ModelParams& p, double tau) {
    const double be = p.beta;
    return {(tau * be + tau + be) / be, (tau * be - tau + be) / be, (tau * be + 2.0 * be - tau) / be,
            (tau * be + 3.0 * be - tau) / be, (tau * be + 2.0 * be + tau) / be};
}

double beta_fn(double x, double y) {
    return std::exp(log_beta(x, y));
}

}  // namespace

std::string to_string(MatrixSource source) {
    return source == MatrixSource::quadrature ? "quadrature" : "closed_form";
}

Matrix j_matrix_quadrature(const ModelParams& p, TuningParam t, const QuadratureOptions& options) {
    return j_from(score_moments(p, t.value(), options));
}

Vec2 xi_vector_quadrature(const ModelParams& p, TuningParam t, const QuadratureOptions& options) {
    const Moments m = score_moments(p, t.value(), options);
    return {m[3], m[4]};
}

ClosedFormTerms closed_form_terms(const ModelParams& p, TuningParam t) {
    const double tau = t.value();
    const double al = p.alpha;
    const double be = p.beta;
    const PrintedArgs g = printed_args(p, tau);

    ClosedFormTerms out{};
    out.j11 = std::pow(be / al, tau + 2.0) * beta_fn(g.a, g.b) *
              (2.0 * (be * tau + tau + be) * (-tau * be - be + tau) /
                   (be * be * (tau + 1.0) * (2.0 * tau + 3.0)) +
               1.0);

    const double pn = std::pow(be, tau - 2.0) / std::pow(al, tau);
    const double psi_a = digamma(g.a);
    const double psi_b = digamma(g.b);
    const double psi_c = digamma(g.c);
    const double psi_d = digamma(g.d);
    const double psi_e = digamma(g.e);
    out.n[0] = pn * beta_fn(g.a, g.b);
    out.n[1] = 2.0 * pn * beta_fn(g.a, g.b) * (psi_b - psi_a);
    out.n[2] = -4.0 * pn * beta_fn(g.a, g.c) * (psi_c - psi_a);
    out.n[3] = pn * beta_fn(g.a, g.b) * ((psi_b - psi_a) * (psi_b - psi_a) + trigamma(g.b) + trigamma(g.a));
    out.n[4] = -4.0 * pn * beta_fn(g.a, g.c) * ((psi_c - psi_a) * (psi_c - psi_a) + (trigamma(g.c) + trigamma(g.a)));
    out.n[5] = 4.0 * pn * beta_fn(g.a, g.d) * ((psi_d - psi_a) * (psi_d - psi_a) + (trigamma(g.d) + trigamma(g.a)));

    const double pb = std::pow(be, tau) / std::pow(al, tau + 1.0);
    out.b[0] = pb * beta_fn(g.a, g.b);
    out.b[1] = pb * beta_fn(g.a, g.b) * (psi_b - psi_a);
    out.b[2] = -2.0 * pb * beta_fn(g.a, g.c) * (psi_c - psi_a);
    out.b[3] = -2.0 * pb * beta_fn(g.e, g.b);
    out.b[4] = -2.0 * pb * beta_fn(g.e, g.b) * (psi_b - psi_e);
    out.b[5] = 4.0 * pb * beta_fn(g.e, g.c) * (psi_c - psi_e);
    return out;
}

Matrix j_matrix_closed_form(const ModelParams& p, TuningParam t) {
    const ClosedFormTerms terms = closed_form_terms(p, t);
    double j22 = 0.0;
    double j12 = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        j22 += terms.n[i];
        j12 += terms.b[i];
    }
    return Matrix::symmetric2(terms.j11, j12, j22);
}

Vec2 xi_vector_closed_form(const ModelParams& p, TuningParam t) {
    const double tau = t.value();
    const double al = p.alpha;
    const double be = p.beta;
    const PrintedArgs g = printed_args(p, tau);
    const double b_ab = beta_fn(g.a, g.b);
    const double xi_a = std::pow(be / al, tau + 1.0) * b_ab * (-tau / (be + tau * be));
    const double xi_b = std::pow(be, tau - 1.0) / std::pow(al, tau) * b_ab *
                        (1.0 + digamma(g.b) +
                         (tau * be + be - tau) / (be * (2.0 * tau + 2.0)) * digamma(g.c) +
                         (3.0 * tau * be + 3.0 * be - tau) / (2.0 * tau * be + 2.0 * be) * digamma(g.a));
    return {xi_a, xi_b};
}

Matrix k_matrix(const ModelParams& p, TuningParam t, MatrixSource source) {
    return asymptotic_matrices(p, t, source).K;
}

AsymptoticMatrices asymptotic_matrices(const ModelParams& p, TuningParam t, MatrixSource source) {
    if (source == MatrixSource::closed_form) {
        const Vec2 xi = xi_vector_closed_form(p, t);
        return {j_matrix_closed_form(p, t), k_from(j_matrix_closed_form(p, t.doubled()), xi), xi, p, t,
                source};
    }
    const QuadratureOptions options;
    const Moments at_tau = score_moments(p, t.value(), options);
    const Vec2 xi{at_tau[3], at_tau[4]};
    const Matrix j_double = t.is_likelihood() ? j_from(at_tau) : j_from(score_moments(p, 2.0 * t.value(), options));
    return {j_from(at_tau), k_from(j_double, xi), xi, p, t, source};
}

std::vector<DiscrepancyRow> discrepancy_report(const DiscrepancyGrid& grid) {
    constexpr double zero_floor = 1e-10;
    std::vector<DiscrepancyRow> rows;
    for (double alpha : grid.alphas) {
        for (double beta : grid.betas) {
            for (double tau : grid.taus) {
                const ModelParams p(alpha, beta);
                const TuningParam t(tau);
                const AsymptoticMatrices closed = asymptotic_matrices(p, t, MatrixSource::closed_form);
                const AsymptoticMatrices quad = asymptotic_matrices(p, t, MatrixSource::quadrature);
                auto push = [&](const char* name, double c, double q) {
                    const double dev = std::abs(c - q);
                    const double rel = std::abs(q) < zero_floor ? dev : dev / std::abs(q);
                    rows.push_back({alpha, beta, tau, name, c, q, rel});
                };
                push("J11", closed.J(0, 0), quad.J(0, 0));
                push("J12", closed.J(0, 1), quad.J(0, 1));
                push("J22", closed.J(1, 1), quad.J(1, 1));
                push("xi_a", closed.xi[0], quad.xi[0]);
                push("xi_b", closed.xi[1], quad.xi[1]);
                push("K11", closed.K(0, 0), quad.K(0, 0));
                push("K12", closed.K(0, 1), quad.K(0, 1));
                push("K22", closed.K(1, 1), quad.K(1, 1));
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const DiscrepancyRow& l, const DiscrepancyRow& r) {
        return std::tie(l.alpha, l.beta, l.tau, l.entry) < std::tie(r.alpha, r.beta, r.tau, r.entry);
    });
    return rows;
}

void write_discrepancy_csv(std::ostream& out, const std::vector<DiscrepancyRow>& rows) {
    out << "alpha,beta,tau,entry,closed,quadrature,rel_dev\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g\n", r.alpha, r.beta, r.tau,
                      r.entry.c_str(), r.closed, r.quadrature, r.rel_dev);
        out << buf;
    }
}

}  // namespace lldpd
