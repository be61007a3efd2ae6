#pragma once

#include <cstddef>
#include <string>

namespace nlror {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string zero_pad(std::size_t value, std::size_t width);

} // namespace nlror
