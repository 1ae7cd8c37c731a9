#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "lldpd/asymptotics.hpp"
#include "lldpd/data_io.hpp"
#include "lldpd/estimation.hpp"
#include "lldpd/rao_tests.hpp"
#include "lldpd/simulation.hpp"
#include "lldpd/svg_plot.hpp"
#include "lldpd/wald_tests.hpp"

namespace lldpd::cli {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string manifest_path(const std::string& out) {
    return out + ".manifest";
}

std::map<std::string, double> parse_null(const std::string& text) {
    std::map<std::string, double> out;
    if (text.empty()) {
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        const std::string key = eq == std::string::npos ? item : item.substr(0, eq);
        if (eq == std::string::npos || (key != "alpha" && key != "beta") || out.count(key)) {
            throw UsageError("--null expects alpha=A, beta=B or alpha=A,beta=B; got '" + text + "'");
        }
        try {
            std::size_t used = 0;
            const std::string value = item.substr(eq + 1);
            out[key] = std::stod(value, &used);
            if (used != value.size()) {
                throw std::invalid_argument(value);
            }
        } catch (const std::logic_error&) {
            throw UsageError("--null: cannot parse the value of " + key);
        }
    }
    return out;
}

void write_with_manifest(const std::string& out, const std::string& content, Manifest manifest,
                         std::chrono::steady_clock::time_point start) {
    write_file_atomic(out, content);
    manifest.emplace_back("output", out);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.emplace_back("wall_time_seconds", num(wall));
    write_manifest_atomic(manifest_path(out), manifest);
}

}  // namespace

int cmd_fit(const FitArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const Sample s = read_observations(std::filesystem::path(args.input));
    const TuningParam t(args.tau);
    FitOptions options;
    options.multistart = args.multistart;
    EstimateResult r = args.fix_alpha   ? fit_restricted(s, t, ConstraintSpec::fix_alpha(*args.fix_alpha), options)
                       : args.fix_beta ? fit_restricted(s, t, ConstraintSpec::fix_beta(*args.fix_beta), options)
                                       : fit_mdpde(s, t, options);
    std::printf("alpha_hat=%s\nbeta_hat=%s\ntau=%s\nobjective=%s\niterations=%zu\nconverged=%s\ngradient_norm=%s\n",
                num(r.params.alpha).c_str(), num(r.params.beta).c_str(), num(args.tau).c_str(),
                num(r.objective_at_opt).c_str(), r.iterations, r.converged ? "true" : "false",
                num(r.gradient_norm).c_str());
    if (!args.out.empty()) {
        std::string csv = "alpha_hat,beta_hat,tau,objective,iterations,converged,gradient_norm\n";
        csv += num(r.params.alpha) + ',' + num(r.params.beta) + ',' + num(args.tau) + ',' + num(r.objective_at_opt) +
               ',' + std::to_string(r.iterations) + ',' + (r.converged ? "true" : "false") + ',' +
               num(r.gradient_norm) + '\n';
        Manifest m{{"command", "fit"}, {"input", args.input}, {"tau", num(args.tau)}};
        if (args.fix_alpha) {
            m.emplace_back("fix_alpha", num(*args.fix_alpha));
        }
        if (args.fix_beta) {
            m.emplace_back("fix_beta", num(*args.fix_beta));
        }
        m.emplace_back("multistart", args.multistart ? "true" : "false");
        write_with_manifest(args.out, csv, m, start);
    }
    return 0;
}

int cmd_test(const TestArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    const std::map<std::string, double> null = parse_null(args.null);
    const bool composite = args.fix_alpha || args.fix_beta;
    const TuningParam t(args.tau);
    const std::vector<double> levels = args.level == 0.05 ? std::vector<double>{0.05}
                                                          : std::vector<double>{0.05, args.level};
    const MatrixSource source = args.closed_form ? MatrixSource::closed_form : MatrixSource::quadrature;
    const bool wald = args.family == "wald";
    WaldOptions wo;
    wo.source = source;
    wo.levels = levels;
    RaoOptions ro;
    ro.source = source;
    ro.levels = levels;

    if (composite && (!null.empty() || args.known_alpha || args.known_beta)) {
        throw UsageError("--fix-alpha/--fix-beta describe a composite null; do not combine them with --null or --known-*");
    }
    std::string hypothesis;
    std::optional<TestOutcome> outcome;
    const Sample s = read_observations(std::filesystem::path(args.input));
    if (composite) {
        const ConstraintSpec c = args.fix_alpha && args.fix_beta ? ConstraintSpec::fix_both(*args.fix_alpha, *args.fix_beta)
                                 : args.fix_alpha                ? ConstraintSpec::fix_alpha(*args.fix_alpha)
                                                                 : ConstraintSpec::fix_beta(*args.fix_beta);
        hypothesis = std::string("composite") + (args.fix_alpha ? " alpha=" + num(*args.fix_alpha) : "") +
                     (args.fix_beta ? " beta=" + num(*args.fix_beta) : "");
        outcome = wald ? wald_composite(s, c, t, wo) : rao_composite(s, c, t, ro);
    } else if (null.count("alpha") && null.count("beta")) {
        if (args.known_alpha || args.known_beta) {
            throw UsageError("a full null leaves no parameter to be known");
        }
        const ModelParams p(null.at("alpha"), null.at("beta"));
        hypothesis = "alpha=" + num(p.alpha) + " beta=" + num(p.beta);
        outcome = wald ? wald_simple_full(s, p, t, wo) : rao_simple_full(s, p, t, ro);
    } else if (null.count("alpha")) {
        if (!args.known_beta || args.known_alpha) {
            throw UsageError("--null alpha=A needs --known-beta (or use --fix-alpha for beta free)");
        }
        hypothesis = "alpha=" + num(null.at("alpha")) + " (beta known " + num(*args.known_beta) + ")";
        outcome = wald ? wald_simple_alpha(s, null.at("alpha"), *args.known_beta, t, wo)
                       : rao_simple_alpha(s, null.at("alpha"), *args.known_beta, t, ro);
    } else if (null.count("beta")) {
        if (!args.known_alpha || args.known_beta) {
            throw UsageError("--null beta=B needs --known-alpha (or use --fix-beta for alpha free)");
        }
        hypothesis = "beta=" + num(null.at("beta")) + " (alpha known " + num(*args.known_alpha) + ")";
        outcome = wald ? wald_simple_beta(s, null.at("beta"), *args.known_alpha, t, wo)
                       : rao_simple_beta(s, null.at("beta"), *args.known_alpha, t, ro);
    } else {
        throw UsageError("give --null, or --fix-alpha/--fix-beta for a composite null");
    }
    const TestOutcome& o = *outcome;
    const bool reject_default = o.reject_at.at(0.05);
    const bool reject_level = o.reject_at.at(args.level);
    std::printf("family=%s\nhypothesis=%s\ntau=%s\nstatistic=%s\ndf=%d\np_value=%s\nreject_at_0.05=%s\n",
                args.family.c_str(), hypothesis.c_str(), num(args.tau).c_str(), num(o.statistic).c_str(), o.df,
                num(o.p_value).c_str(), reject_default ? "yes" : "no");
    if (args.level != 0.05) {
        std::printf("reject_at_%s=%s\n", num(args.level).c_str(), reject_level ? "yes" : "no");
    }
    if (!args.out.empty()) {
        std::string csv = "family,hypothesis,tau,statistic,df,p_value,reject_0.05,level,reject_level\n";
        csv += args.family + ",\"" + hypothesis + "\"," + num(args.tau) + ',' + num(o.statistic) + ',' +
               std::to_string(o.df) + ',' + num(o.p_value) + ',' + (reject_default ? "yes" : "no") + ',' +
               num(args.level) + ',' + (reject_level ? "yes" : "no") + '\n';
        Manifest m{{"command", "test"},     {"family", args.family},   {"input", args.input},
                   {"tau", num(args.tau)},  {"hypothesis", hypothesis}, {"level", num(args.level)},
                   {"matrix_source", to_string(source)}};
        write_with_manifest(args.out, csv, m, start);
    }
    return 0;
}

int cmd_simulate(const SimulateArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    std::ifstream in(args.config);
    if (!in) {
        throw std::invalid_argument("cannot open config " + args.config);
    }
    SimulationConfig cfg = parse_config(in, args.seed);
    if (args.replications) {
        cfg.replications = *args.replications;
        cfg.validate();
    }
    const RejectionTable table = run_study(cfg, args.workers);
    std::ostringstream csv;
    write_rejection_csv(csv, table);
    Manifest m{{"command", "simulate"}, {"config", args.config}};
    for (const auto& kv : config_entries(cfg)) {
        m.push_back(kv);
    }
    m.emplace_back("workers", std::to_string(args.workers));
    std::string flagged;
    for (const RejectionRow* r : table.flagged(cfg.replications)) {
        const std::string cell = r->family + "/tau=" + num(r->tau) + "/n=" + std::to_string(r->n) +
                                 "/eps=" + num(r->eps) + "/alpha_tilde=" + num(r->alpha_tilde);
        std::fprintf(stderr, "warning: %zu of %zu fits failed in cell %s\n", r->failures, cfg.replications,
                     cell.c_str());
        flagged += (flagged.empty() ? "" : ";") + cell;
    }
    m.emplace_back("flagged_cells", flagged);
    write_with_manifest(args.out, csv.str(), m, start);
    std::printf("rows=%zu\noutput=%s\nmanifest=%s\n", table.rows.size(), args.out.c_str(),
                manifest_path(args.out).c_str());
    return 0;
}

int cmd_report(const ReportArgs& args) {
    const std::vector<DiscrepancyRow> rows = discrepancy_report();
    if (args.out.empty()) {
        write_discrepancy_csv(std::cout, rows);
        return 0;
    }
    std::ostringstream csv;
    write_discrepancy_csv(csv, rows);
    write_with_manifest(args.out, csv.str(), {{"command", "report"}}, std::chrono::steady_clock::now());
    std::map<std::string, double> worst;
    for (const DiscrepancyRow& r : rows) {
        worst[r.entry] = std::max(worst[r.entry], r.rel_dev);
    }
    for (const auto& [entry, dev] : worst) {
        std::printf("max_rel_dev_%s=%s\n", entry.c_str(), num(dev).c_str());
    }
    return 0;
}

int cmd_plot(const PlotArgs& args) {
    std::ifstream in(args.input);
    if (!in) {
        throw std::invalid_argument("cannot open " + args.input);
    }
    const RejectionTable table = read_rejection_csv(in);
    PlotSelection sel;
    sel.family = args.family;
    sel.eps = args.eps;
    sel.n = args.n;
    sel.alpha_tilde = args.alpha_tilde;
    sel.nominal_level = args.level;
    write_file_atomic(args.out, render_svg(table, parse_plot_kind(args.kind), sel));
    std::printf("output=%s\n", args.out.c_str());
    return 0;
}

}  // namespace lldpd::cli
