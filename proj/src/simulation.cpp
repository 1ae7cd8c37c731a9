#include "lldpd/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "lldpd/asymptotics.hpp"
#include "lldpd/chi_square.hpp"
#include "lldpd/estimation.hpp"
#include "lldpd/rao_tests.hpp"
#include "lldpd/wald_tests.hpp"

namespace lldpd {

namespace {

enum Status : std::uint8_t { kAccept = 0, kReject = 1, kFailed = 2 };

constexpr std::size_t kWald = 0;
constexpr std::size_t kRao = 1;
const char* const kFamilyNames[2] = {"wald", "rao"};

struct Cell {
    std::size_t n;
    double eps;
    double alpha_tilde;
};

// Per-τ quantities that do not depend on the data.
struct TauContext {
    TuningParam tau;
    AsymptoticMatrices matrices;
    ScoreEvaluator score;
};

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

auto row_key(const RejectionRow& r) {
    return std::make_tuple(r.family, r.tau, r.n, r.eps, r.alpha_tilde);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

}  // namespace

ModelParams NullSpec::null_point() const {
    return parameter == Parameter::alpha ? ModelParams(value, known) : ModelParams(known, value);
}

void SimulationConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& what) {
        throw std::invalid_argument("simulation config: " + key + ": " + what);
    };
    if (tau_grid.empty()) {
        fail("tau_grid", "empty");
    }
    for (double t : tau_grid) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            fail("tau_grid", "values must be finite and >= 0");
        }
    }
    if (n_grid.empty()) {
        fail("n_grid", "empty");
    }
    for (std::size_t n : n_grid) {
        if (n < 2) {
            fail("n_grid", "sample sizes must be >= 2");
        }
    }
    if (eps_grid.empty()) {
        fail("eps_grid", "empty");
    }
    for (double e : eps_grid) {
        if (!(e >= 0.0 && e <= 0.5)) {
            fail("eps_grid", "values must lie in [0, 0.5]");
        }
    }
    if (contaminant_scales.empty()) {
        fail("contaminant_scales", "empty");
    }
    for (double a : contaminant_scales) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            fail("contaminant_scales", "values must be finite and > 0");
        }
    }
    if (replications < 1) {
        fail("replications", "must be >= 1");
    }
    if (!(significance > 0.0 && significance < 1.0)) {
        fail("significance", "must lie in (0, 1)");
    }
    (void)null.null_point();
}

std::vector<const RejectionRow*> RejectionTable::flagged(std::size_t requested_replicates) const {
    std::vector<const RejectionRow*> out;
    for (const RejectionRow& r : rows) {
        if (static_cast<double>(r.failures) > 0.01 * static_cast<double>(requested_replicates)) {
            out.push_back(&r);
        }
    }
    return out;
}

const RejectionRow& RejectionTable::at(const std::string& family, double tau, std::size_t n, double eps,
                                       double alpha_tilde) const {
    for (const RejectionRow& r : rows) {
        if (r.family == family && r.tau == tau && r.n == n && r.eps == eps && r.alpha_tilde == alpha_tilde) {
            return r;
        }
    }
    throw std::out_of_range("no rejection row for " + family + " tau=" + format_real(tau) +
                            " n=" + std::to_string(n) + " eps=" + format_real(eps) +
                            " alpha_tilde=" + format_real(alpha_tilde));
}

Sample replicate_sample(const ModelParams& population, const ContaminationScheme& scheme, std::size_t n,
                        RandomStream& rng) {
    const auto k = static_cast<std::size_t>(std::llround(scheme.epsilon * static_cast<double>(n)));
    if (k > n) {
        throw std::invalid_argument("contamination exceeds the sample size");
    }
    std::vector<double> values;
    values.reserve(n);
    for (std::size_t i = 0; i < n - k; ++i) {
        values.push_back(quantile(rng.uniform_open(), population));
    }
    for (std::size_t i = 0; i < k; ++i) {
        values.push_back(quantile(rng.uniform_open(), scheme.contaminant));
    }
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_index(i);
        std::swap(values[i - 1], values[j]);
    }
    return Sample(std::move(values));
}

std::uint64_t cell_id(std::size_t n, double eps, double alpha_tilde) noexcept {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(n));
    h = mix64(h ^ std::bit_cast<std::uint64_t>(eps));
    return mix64(h ^ std::bit_cast<std::uint64_t>(alpha_tilde));
}

RejectionTable run_study(const SimulationConfig& cfg, std::size_t workers) {
    cfg.validate();
    workers = std::max<std::size_t>(workers, 1);

    std::vector<Cell> cells;
    for (std::size_t n : cfg.n_grid) {
        for (double eps : cfg.eps_grid) {
            for (double at : cfg.contaminant_scales) {
                cells.push_back({n, eps, at});
            }
        }
    }
    const ModelParams null = cfg.null.null_point();
    std::vector<TauContext> contexts;
    for (double tv : cfg.tau_grid) {
        const TuningParam t(tv);
        AsymptoticMatrices m = asymptotic_matrices(null, t);
        ScoreEvaluator score(m);
        contexts.push_back({t, std::move(m), score});
    }
    const bool test_alpha = cfg.null.parameter == NullSpec::Parameter::alpha;
    const ConstraintSpec known = test_alpha ? ConstraintSpec::fix_beta(cfg.null.known)
                                            : ConstraintSpec::fix_alpha(cfg.null.known);
    const double critical = chi_square_critical_value(1, cfg.significance);
    const std::size_t n_tau = contexts.size();
    const std::size_t stride = 2 * n_tau;
    const std::size_t items = cells.size() * cfg.replications;
    std::vector<std::uint8_t> status(items * stride, kFailed);

    auto run_item = [&](std::size_t item) {
        const Cell& cell = cells[item / cfg.replications];
        const std::size_t rep = item % cfg.replications;
        RandomStream rng = RandomStream::derived(cfg.master_seed, cell_id(cell.n, cell.eps, cell.alpha_tilde), rep);
        const ContaminationScheme scheme{cell.eps, ModelParams(cell.alpha_tilde, cfg.population.beta)};
        const Sample s = replicate_sample(cfg.population, scheme, cell.n, rng);
        std::uint8_t* out = &status[item * stride];
        for (std::size_t ti = 0; ti < n_tau; ++ti) {
            const TauContext& ctx = contexts[ti];
            try {
                const EstimateResult est = fit_restricted(s, ctx.tau, known);
                const double stat =
                    test_alpha ? wald_alpha_statistic(s.size(), est.params.alpha, cfg.null.value, ctx.matrices)
                               : wald_beta_statistic(s.size(), est.params.beta, cfg.null.value, ctx.matrices);
                out[2 * ti + kWald] = stat > critical ? kReject : kAccept;
            } catch (const std::exception&) {
                out[2 * ti + kWald] = kFailed;
            }
            try {
                const Vec2 u = ctx.score.mean(s);
                const double stat = test_alpha ? rao_alpha_statistic(s.size(), u[0], ctx.matrices)
                                               : rao_beta_statistic(s.size(), u[1], ctx.matrices);
                out[2 * ti + kRao] = stat > critical ? kReject : kAccept;
            } catch (const std::exception&) {
                out[2 * ti + kRao] = kFailed;
            }
        }
    };

    if (workers == 1) {
        for (std::size_t i = 0; i < items; ++i) {
            run_item(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < items; i = next.fetch_add(1)) {
                    run_item(i);
                }
            });
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }

    RejectionTable table;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (std::size_t ti = 0; ti < n_tau; ++ti) {
            for (std::size_t fam : {kWald, kRao}) {
                std::size_t rejections = 0;
                std::size_t failures = 0;
                for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
                    const std::uint8_t st = status[(c * cfg.replications + rep) * stride + 2 * ti + fam];
                    rejections += st == kReject ? 1 : 0;
                    failures += st == kFailed ? 1 : 0;
                }
                const std::size_t used = cfg.replications - failures;
                const double rate = used > 0 ? static_cast<double>(rejections) / static_cast<double>(used) : 0.0;
                const double se = used > 0 ? std::sqrt(rate * (1.0 - rate) / static_cast<double>(used)) : 0.0;
                table.rows.push_back({kFamilyNames[fam], cfg.tau_grid[ti], cells[c].n, cells[c].eps,
                                      cells[c].alpha_tilde, rejections, used, rate, se, failures});
            }
        }
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const RejectionRow& a, const RejectionRow& b) { return row_key(a) < row_key(b); });
    return table;
}

RejectionTable run_level_study(const SimulationConfig& cfg, std::size_t workers) {
    return run_study(cfg, workers);
}

RejectionTable run_power_study(const SimulationConfig& cfg, std::size_t workers) {
    return run_study(cfg, workers);
}

namespace {

SimulationConfig study_grids(std::uint64_t master_seed, std::size_t replications) {
    SimulationConfig cfg;
    for (int i = 0; i <= 10; ++i) {
        cfg.tau_grid.push_back(i / 10.0);
    }
    for (std::size_t n = 20; n <= 100; n += 10) {
        cfg.n_grid.push_back(n);
    }
    cfg.eps_grid = {0.0, 0.05, 0.10, 0.15, 0.20};
    cfg.replications = replications;
    cfg.significance = 0.05;
    cfg.master_seed = master_seed;
    cfg.null = {NullSpec::Parameter::alpha, 1.0, 5.0};
    return cfg;
}

}  // namespace

SimulationConfig level_study_config(std::uint64_t master_seed, std::size_t replications) {
    SimulationConfig cfg = study_grids(master_seed, replications);
    cfg.population = ModelParams(1.0, 5.0);
    cfg.contaminant_scales = {3.0, 6.0};
    return cfg;
}

SimulationConfig power_study_config(std::uint64_t master_seed, std::size_t replications) {
    SimulationConfig cfg = study_grids(master_seed, replications);
    cfg.population = ModelParams(1.15, 5.0);
    cfg.contaminant_scales = {0.5};
    return cfg;
}

void write_rejection_csv(std::ostream& out, const RejectionTable& table) {
    std::vector<const RejectionRow*> rows;
    for (const RejectionRow& r : table.rows) {
        rows.push_back(&r);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RejectionRow* a, const RejectionRow* b) { return row_key(*a) < row_key(*b); });
    out << "family,tau,n,eps,alpha_tilde,rejections,replicates,rate,std_err\n";
    for (const RejectionRow* r : rows) {
        out << r->family << ',' << format_real(r->tau) << ',' << r->n << ',' << format_real(r->eps) << ','
            << format_real(r->alpha_tilde) << ',' << r->rejections << ',' << r->replicates << ','
            << format_real(r->rate) << ',' << format_real(r->std_err) << '\n';
    }
}

RejectionTable read_rejection_csv(std::istream& in) {
    static const std::vector<std::string> kColumns{"family", "tau",        "n",    "eps",    "alpha_tilde",
                                                   "rejections", "replicates", "rate", "std_err"};
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("rejection table: empty input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const std::vector<std::string> header = split(line, ',');
    std::vector<std::size_t> index(kColumns.size());
    std::string missing;
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
        const auto it = std::find(header.begin(), header.end(), kColumns[k]);
        if (it == header.end()) {
            missing += (missing.empty() ? "" : ", ") + kColumns[k];
        } else {
            index[k] = static_cast<std::size_t>(it - header.begin());
        }
    }
    if (!missing.empty()) {
        throw std::invalid_argument("rejection table: missing columns: " + missing);
    }
    RejectionTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != header.size()) {
            throw std::invalid_argument("rejection table: line " + std::to_string(line_no) +
                                        ": expected " + std::to_string(header.size()) + " fields");
        }
        try {
            RejectionRow r;
            r.family = f[index[0]];
            r.tau = std::stod(f[index[1]]);
            r.n = std::stoull(f[index[2]]);
            r.eps = std::stod(f[index[3]]);
            r.alpha_tilde = std::stod(f[index[4]]);
            r.rejections = std::stoull(f[index[5]]);
            r.replicates = std::stoull(f[index[6]]);
            r.rate = std::stod(f[index[7]]);
            r.std_err = std::stod(f[index[8]]);
            table.rows.push_back(r);
        } catch (const std::logic_error&) {
            throw std::invalid_argument("rejection table: line " + std::to_string(line_no) + ": unparsable field");
        }
    }
    return table;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void write_manifest_atomic(const std::filesystem::path& path, const Manifest& manifest) {
    std::string content;
    for (const auto& [k, v] : manifest) {
        content += k + '=' + v + '\n';
    }
    write_file_atomic(path, content);
}

}  // namespace lldpd
