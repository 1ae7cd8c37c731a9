#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "lldpd/dpd_objective.hpp"
#include "lldpd/linalg.hpp"
#include "lldpd/loglogistic.hpp"
#include "lldpd/quadrature.hpp"

namespace lldpd {

// Asymptotic matrices of the MDPDE for the log-logistic model:
//
//   J_τ = ∫ s sᵀ f^{τ+1} dx,   ξ_τ = ∫ s f^{τ+1} dx,   K_τ = J_{2τ} − ξ_τ ξ_τᵀ,
//
// with s the likelihood score. Two routes are provided. The quadrature route
// substitutes u = F(x), which turns every integrand into a smooth function on
// (0, 1): s_α = (β/α)(2u − 1), s_β = −log(u/(1−u))(2u − 1)/β + 1/β and
// f^{τ+1} dx = f^τ du with f = (β/α) u^{1−1/β} (1−u)^{1+1/β}. It is the
// reference for every test statistic. The closed-form route transcribes the
// published J¹¹, N₁..N₆, B₁..B₆ and ξ expressions unchanged and exists to be
// audited against quadrature.

enum class MatrixSource { closed_form, quadrature };

std::string to_string(MatrixSource source);

struct AsymptoticMatrices {
    Matrix J;
    Matrix K;
    Vec2 xi;
    ModelParams at;
    TuningParam tau;
    MatrixSource source;
};

/// J_τ by adaptive quadrature; throws QuadratureError on non-convergence.
Matrix j_matrix_quadrature(const ModelParams& p, TuningParam t, const QuadratureOptions& options = {});

/// ξ_τ by adaptive quadrature.
Vec2 xi_vector_quadrature(const ModelParams& p, TuningParam t, const QuadratureOptions& options = {});

/// Published closed form of J_τ, transcribed as printed.
Matrix j_matrix_closed_form(const ModelParams& p, TuningParam t);

/// Published closed form of ξ_τ, transcribed as printed.
Vec2 xi_vector_closed_form(const ModelParams& p, TuningParam t);

/// K_τ = J_{2τ} − ξ_τ ξ_τᵀ from the chosen source.
Matrix k_matrix(const ModelParams& p, TuningParam t, MatrixSource source);

/// J, K and ξ together; the quadrature route shares evaluations between them.
AsymptoticMatrices asymptotic_matrices(const ModelParams& p, TuningParam t,
                                       MatrixSource source = MatrixSource::quadrature);

/// Individual printed terms of J²² (N₁..N₆) and J¹² (B₁..B₆).
struct ClosedFormTerms {
    double j11;
    std::array<double, 6> n;
    std::array<double, 6> b;
};
ClosedFormTerms closed_form_terms(const ModelParams& p, TuningParam t);

struct DiscrepancyRow {
    double alpha;
    double beta;
    double tau;
    std::string entry;  // J11, J12, J22, xi_a, xi_b, K11, K12, K22
    double closed;
    double quadrature;
    /// |closed − quadrature| / |quadrature|; when |quadrature| is below the
    /// quadrature tolerance the entry is zero to working accuracy and the
    /// absolute deviation is reported instead.
    double rel_dev;
};

struct DiscrepancyGrid {
    std::vector<double> alphas{0.5, 1.0, 3.0};
    std::vector<double> betas{2.0, 5.0, 10.0};
    std::vector<double> taus{0.0, 0.25, 0.5, 1.0};
};

/// One row per (α, β, τ, entry), sorted by (α, β, τ, entry name).
std::vector<DiscrepancyRow> discrepancy_report(const DiscrepancyGrid& grid = {});

/// CSV with header `alpha,beta,tau,entry,closed,quadrature,rel_dev` and
/// floats printed with 17 significant digits.
void write_discrepancy_csv(std::ostream& out, const std::vector<DiscrepancyRow>& rows);

}  // namespace lldpd
