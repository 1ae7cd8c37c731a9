#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace lldpd::cli {

struct FitArgs {
    std::string input;
    double tau = 0.0;
    std::optional<double> fix_alpha;
    std::optional<double> fix_beta;
    bool multistart = false;
    std::string out;
};

struct TestArgs {
    std::string family;
    std::string input;
    double tau = 0.0;
    std::string null;
    std::optional<double> known_alpha;
    std::optional<double> known_beta;
    std::optional<double> fix_alpha;
    std::optional<double> fix_beta;
    double level = 0.05;
    bool closed_form = false;
    std::string out;
};

struct SimulateArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replications;
    std::size_t workers = 1;
    std::string out = "rejections.csv";
};

struct ReportArgs {
    std::string out;
};

struct PlotArgs {
    std::string input;
    std::string kind;
    std::string out;
    std::string family = "wald";
    std::optional<double> eps;
    std::optional<std::size_t> n;
    std::optional<double> alpha_tilde;
    double level = 0.05;
};

int cmd_fit(const FitArgs& args);
int cmd_test(const TestArgs& args);
int cmd_simulate(const SimulateArgs& args);
int cmd_report(const ReportArgs& args);
int cmd_plot(const PlotArgs& args);

/// Raised for flag combinations that do not describe a valid request.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lldpd::cli
