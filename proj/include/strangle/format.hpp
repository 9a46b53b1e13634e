#pragma once

#include <array>
#include <charconv>
#include <string>
#include <system_error>

// Locale-independent number formatting for CLI and CSV output.
namespace strangle::fmt {

// Fixed notation, correctly rounded (ties to even) at the requested digit.
inline std::string fixed(double value, int decimals) {
    std::array<char, 512> buf{};
    const auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) {
        return "nan";
    }
    return {buf.data(), end};
}

// Shortest representation that parses back to the same double.
inline std::string shortest(double value) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return {buf.data(), end};
}

}  // namespace strangle::fmt
