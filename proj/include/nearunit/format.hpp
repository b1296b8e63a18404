#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace nearunit {

/// Numeric output for reports: 17 significant digits.
[[nodiscard]] inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Shortest representation that parses back to the same double.
[[nodiscard]] inline std::string fmt_shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace nearunit
