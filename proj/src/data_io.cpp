#include "lldpd/data_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace lldpd {

Sample read_observations(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        const std::string text = line.substr(first, last - first + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": cannot parse '" + text + "'");
        }
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": observation must be positive and finite");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw std::invalid_argument("input contains no observations");
    }
    return Sample(std::move(values));
}

Sample read_observations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open " + path.string());
    }
    return read_observations(in);
}

}  // namespace lldpd
