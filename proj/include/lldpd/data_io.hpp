#pragma once

#include <filesystem>
#include <istream>

#include "lldpd/loglogistic.hpp"

namespace lldpd {

/// One observation per line; blank lines and text after `#` are ignored.
/// Throws std::invalid_argument naming the line for unparsable or
/// non-positive values, and when no observations are present.
Sample read_observations(std::istream& in);
Sample read_observations(const std::filesystem::path& path);

}  // namespace lldpd
