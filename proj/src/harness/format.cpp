#include "nlror/harness/format.hpp"

#include <array>
#include <charconv>

namespace nlror {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string zero_pad(std::size_t value, std::size_t width) {
    std::string s = std::to_string(value);
    if (s.size() < width) {
        s.insert(0, width - s.size(), '0');
    }
    return s;
}

} // namespace nlror
