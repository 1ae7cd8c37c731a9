#pragma once

#include <optional>
#include <string>

#include "lldpd/simulation.hpp"

namespace lldpd {

enum class PlotKind { level_vs_n, level_vs_eps, power_vs_n, power_vs_eps };

/// Parses "level-vs-n", "level-vs-eps", "power-vs-n" or "power-vs-eps".
PlotKind parse_plot_kind(const std::string& text);
std::string to_string(PlotKind kind);

struct PlotSelection {
    std::string family = "wald";
    /// Held fixed for the *-vs-n kinds; defaults to the smallest ε present.
    std::optional<double> eps;
    /// Held fixed for the *-vs-eps kinds; defaults to the largest n present.
    std::optional<std::size_t> n;
    /// Defaults to the smallest α̃ present.
    std::optional<double> alpha_tilde;
    /// Height of the horizontal reference line.
    double nominal_level = 0.05;
};

/// Line chart of rejection rate, one polyline per τ, on an 800×600
/// viewport. Output bytes depend only on the arguments. Throws
/// std::invalid_argument when no rows match the selection.
std::string render_svg(const RejectionTable& table, PlotKind kind, const PlotSelection& selection = {});

}  // namespace lldpd
