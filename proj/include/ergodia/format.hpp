#pragma once

#include <span>
#include <string>

namespace ergodia {

// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string format_double(double value);

std::string csv_row(std::span<const std::string> cells);

}  // namespace ergodia
