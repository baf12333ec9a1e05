#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tlif {

/// Shortest decimal text that round-trips to the same double.
std::string format_shortest(double v);

/// printf-style "%.17g".
std::string format_g17(double v);

/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double v, int decimals);

/// Parses the whole of `text` (surrounding blanks allowed) as a double.
std::optional<double> parse_double(std::string_view text);

}  // namespace tlif
