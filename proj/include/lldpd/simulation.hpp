#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lldpd/loglogistic.hpp"

namespace lldpd {

/// ε-contamination: round(ε n) of the n observations come from `contaminant`.
struct ContaminationScheme {
    double epsilon;
    ModelParams contaminant;
};

/// Simple null on one parameter with the other known.
struct NullSpec {
    enum class Parameter { alpha, beta };
    Parameter parameter = Parameter::alpha;
    double value = 1.0;
    /// Value of the parameter that is not tested.
    double known = 5.0;

    [[nodiscard]] ModelParams null_point() const;
};

struct SimulationConfig {
    ModelParams population{1.0, 5.0};
    NullSpec null;
    std::vector<double> tau_grid;
    std::vector<std::size_t> n_grid;
    std::vector<double> eps_grid;
    /// Contaminant scales α̃; the contaminant shape is the population shape.
    std::vector<double> contaminant_scales;
    std::size_t replications = 2000;
    double significance = 0.05;
    std::uint64_t master_seed = 0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct RejectionRow {
    std::string family;  // "wald" or "rao"
    double tau;
    std::size_t n;
    double eps;
    double alpha_tilde;
    std::size_t rejections;
    /// Replicates that produced a statistic (failed fits excluded).
    std::size_t replicates;
    double rate;
    double std_err;
    std::size_t failures = 0;
};

struct RejectionTable {
    std::vector<RejectionRow> rows;

    /// Rows whose failure count exceeds 1% of the requested replicates.
    [[nodiscard]] std::vector<const RejectionRow*> flagged(std::size_t requested_replicates) const;
    /// Row lookup; throws std::out_of_range when absent.
    [[nodiscard]] const RejectionRow& at(const std::string& family, double tau, std::size_t n, double eps,
                                         double alpha_tilde) const;
};

/// n − k population draws followed by k = round(ε n) contaminant draws,
/// then shuffled, all from `rng`.
Sample replicate_sample(const ModelParams& population, const ContaminationScheme& scheme, std::size_t n,
                        RandomStream& rng);

/// Stream identifier of the (n, ε, α̃) cell; every τ and both families see
/// the same samples within a cell.
std::uint64_t cell_id(std::size_t n, double eps, double alpha_tilde) noexcept;

/// Runs the Wald-type and Rao-type one-parameter tests of cfg.null on every
/// (τ, n, ε, α̃) cell. The result does not depend on `workers`.
RejectionTable run_study(const SimulationConfig& cfg, std::size_t workers = 1);

/// Empirical level: population satisfies the null.
RejectionTable run_level_study(const SimulationConfig& cfg, std::size_t workers = 1);
/// Empirical power: population violates the null.
RejectionTable run_power_study(const SimulationConfig& cfg, std::size_t workers = 1);

/// Level design: population (1, 5), H₀: α = 1 with β = 5 known,
/// τ ∈ {0, 0.1, …, 1}, n ∈ {20, 30, …, 100}, ε ∈ {0, 0.05, …, 0.2}, α̃ ∈ {3, 6}.
SimulationConfig level_study_config(std::uint64_t master_seed, std::size_t replications = 2000);
/// Power design: population (1.15, 5), same null and grids, α̃ = 0.5.
SimulationConfig power_study_config(std::uint64_t master_seed, std::size_t replications = 2000);

/// Header `family,tau,n,eps,alpha_tilde,rejections,replicates,rate,std_err`;
/// rows sorted by (family, tau, n, eps, alpha_tilde); reals with 6 decimals.
void write_rejection_csv(std::ostream& out, const RejectionTable& table);
RejectionTable read_rejection_csv(std::istream& in);

/// Ordered key=value lines written to a temporary file and renamed into place.
using Manifest = std::vector<std::pair<std::string, std::string>>;
void write_manifest_atomic(const std::filesystem::path& path, const Manifest& manifest);
/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Canonical key=value rendering of a configuration (parseable by parse_config).
Manifest config_entries(const SimulationConfig& cfg);

/// Parses `key=value` lines; blank lines and `#` comments are ignored, grids
/// are comma lists. `seed_override` replaces or supplies master_seed. Unknown
/// keys, malformed values and a missing master_seed raise
/// std::invalid_argument naming the key.
SimulationConfig parse_config(std::istream& in, const std::optional<std::uint64_t>& seed_override = std::nullopt);

}  // namespace lldpd
