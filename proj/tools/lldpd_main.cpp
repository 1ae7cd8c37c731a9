#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace lldpd::cli;

int main(int argc, char** argv) {
    CLI::App app{"Robust estimation and testing for the log-logistic model"};
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Minimum DPD estimate of (alpha, beta)");
    fit_cmd->add_option("--input", fit.input, "Observations, one per line")->required();
    fit_cmd->add_option("--tau", fit.tau, "DPD tuning constant")->check(CLI::NonNegativeNumber);
    auto* fa = fit_cmd->add_option("--fix-alpha", fit.fix_alpha, "Hold alpha fixed");
    fit_cmd->add_option("--fix-beta", fit.fix_beta, "Hold beta fixed")->excludes(fa);
    fit_cmd->add_flag("--multistart", fit.multistart, "Five deterministic starting points");
    fit_cmd->add_option("--out", fit.out, "CSV output path");

    TestArgs test;
    auto* test_cmd = app.add_subcommand("test", "Wald-type or Rao-type test");
    test_cmd->add_option("family", test.family, "wald or rao")->required()->check(CLI::IsMember({"wald", "rao"}));
    test_cmd->add_option("--input", test.input, "Observations, one per line")->required();
    test_cmd->add_option("--tau", test.tau, "DPD tuning constant")->check(CLI::NonNegativeNumber);
    test_cmd->add_option("--null", test.null, "alpha=A, beta=B or alpha=A,beta=B");
    test_cmd->add_option("--known-alpha", test.known_alpha, "Known alpha for a test on beta");
    test_cmd->add_option("--known-beta", test.known_beta, "Known beta for a test on alpha");
    test_cmd->add_option("--fix-alpha", test.fix_alpha, "Composite null alpha = value, beta free");
    test_cmd->add_option("--fix-beta", test.fix_beta, "Composite null beta = value, alpha free");
    test_cmd->add_option("--level", test.level, "Significance level")->check(CLI::Range(0.0, 1.0));
    test_cmd->add_flag("--expert-closed-form", test.closed_form, "Use the closed-form J and K (audit only)");
    test_cmd->add_option("--out", test.out, "CSV output path");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo level or power study");
    sim_cmd->add_option("--config", sim.config, "key=value configuration file")->required();
    sim_cmd->add_option("--seed", sim.seed, "Master seed (overrides the config)");
    sim_cmd->add_option("--replications", sim.replications, "Replicates per cell (overrides the config)");
    sim_cmd->add_option("--workers", sim.workers, "Worker threads")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--out", sim.out, "Rejection table CSV path");

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Closed-form versus quadrature audit of J, K and xi");
    report_cmd->add_option("--out", report.out, "CSV output path (default: standard output)");

    PlotArgs plot;
    auto* plot_cmd = app.add_subcommand("plot", "SVG line chart of a rejection table");
    plot_cmd->add_option("--input", plot.input, "Rejection table CSV")->required();
    plot_cmd->add_option("--kind", plot.kind, "level-vs-n, level-vs-eps, power-vs-n or power-vs-eps")->required();
    plot_cmd->add_option("--out", plot.out, "SVG output path")->required();
    plot_cmd->add_option("--family", plot.family, "wald or rao");
    plot_cmd->add_option("--eps", plot.eps, "Contamination held fixed for *-vs-n");
    plot_cmd->add_option("--n", plot.n, "Sample size held fixed for *-vs-eps");
    plot_cmd->add_option("--alpha-tilde", plot.alpha_tilde, "Contaminant scale to plot");
    plot_cmd->add_option("--level", plot.level, "Reference line height");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (*fit_cmd) {
            return cmd_fit(fit);
        }
        if (*test_cmd) {
            return cmd_test(test);
        }
        if (*sim_cmd) {
            return cmd_simulate(sim);
        }
        if (*report_cmd) {
            return cmd_report(report);
        }
        if (*plot_cmd) {
            return cmd_plot(plot);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
