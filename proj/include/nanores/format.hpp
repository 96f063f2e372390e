#pragma once

#include <string>
#include <string_view>

namespace nanores {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

/// Strict decimal parse; throws std::invalid_argument on trailing junk or empty input.
double parse_double(std::string_view text);

}  // namespace nanores
