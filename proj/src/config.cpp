#include <charconv>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <system_error>

#include "lldpd/simulation.hpp"

namespace lldpd {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config key '" + key + "': " + what);
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        bad(key, "malformed number '" + t + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        bad(key, "malformed non-negative integer '" + t + "'");
    }
    return v;
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& key, const std::string& text, Parse parse) {
    std::vector<T> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (trim(item).empty()) {
            bad(key, "malformed list '" + text + "'");
        }
        out.push_back(static_cast<T>(parse(key, item)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string real_text(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class T, class Fmt>
std::string join(const std::vector<T>& xs, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i ? "," : "") + fmt(xs[i]);
    }
    return out;
}

}  // namespace

Manifest config_entries(const SimulationConfig& cfg) {
    auto size_text = [](std::size_t v) { return std::to_string(v); };
    return {
        {"population_alpha", real_text(cfg.population.alpha)},
        {"population_beta", real_text(cfg.population.beta)},
        {"null_parameter", cfg.null.parameter == NullSpec::Parameter::alpha ? "alpha" : "beta"},
        {"null_value", real_text(cfg.null.value)},
        {"known_value", real_text(cfg.null.known)},
        {"tau_grid", join(cfg.tau_grid, real_text)},
        {"n_grid", join(cfg.n_grid, size_text)},
        {"eps_grid", join(cfg.eps_grid, real_text)},
        {"contaminant_scales", join(cfg.contaminant_scales, real_text)},
        {"replications", std::to_string(cfg.replications)},
        {"significance", real_text(cfg.significance)},
        {"master_seed", std::to_string(cfg.master_seed)},
    };
}

SimulationConfig parse_config(std::istream& in, const std::optional<std::uint64_t>& seed_override) {
    SimulationConfig cfg;
    std::set<std::string> seen;
    double pop_alpha = cfg.population.alpha;
    double pop_beta = cfg.population.beta;
    bool has_seed = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (!seen.insert(key).second) {
            bad(key, "given more than once");
        }
        if (key == "population_alpha") {
            pop_alpha = parse_real(key, value);
        } else if (key == "population_beta") {
            pop_beta = parse_real(key, value);
        } else if (key == "null_parameter") {
            if (value == "alpha") {
                cfg.null.parameter = NullSpec::Parameter::alpha;
            } else if (value == "beta") {
                cfg.null.parameter = NullSpec::Parameter::beta;
            } else {
                bad(key, "expected 'alpha' or 'beta'");
            }
        } else if (key == "null_value") {
            cfg.null.value = parse_real(key, value);
        } else if (key == "known_value") {
            cfg.null.known = parse_real(key, value);
        } else if (key == "tau_grid") {
            cfg.tau_grid = parse_list<double>(key, value, parse_real);
        } else if (key == "n_grid") {
            cfg.n_grid = parse_list<std::size_t>(key, value, parse_unsigned);
        } else if (key == "eps_grid") {
            cfg.eps_grid = parse_list<double>(key, value, parse_real);
        } else if (key == "contaminant_scales") {
            cfg.contaminant_scales = parse_list<double>(key, value, parse_real);
        } else if (key == "replications") {
            cfg.replications = parse_unsigned(key, value);
        } else if (key == "significance") {
            cfg.significance = parse_real(key, value);
        } else if (key == "master_seed") {
            cfg.master_seed = parse_unsigned(key, value);
            has_seed = true;
        } else {
            bad(key, "unknown key");
        }
    }
    if (seed_override) {
        cfg.master_seed = *seed_override;
        has_seed = true;
    }
    if (!has_seed) {
        bad("master_seed", "missing (set it in the config or pass --seed)");
    }
    try {
        cfg.population = ModelParams(pop_alpha, pop_beta);
    } catch (const std::domain_error&) {
        bad("population_alpha/population_beta", "must be finite and > 0");
    }
    try {
        (void)cfg.null.null_point();
    } catch (const std::domain_error&) {
        bad("null_value/known_value", "must be finite and > 0");
    }
    cfg.validate();
    return cfg;
}

}  // namespace lldpd
