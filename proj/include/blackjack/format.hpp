#pragma once

#include <cstdio>
#include <string>

namespace blackjack {

/// Fixed-point text of `x` cut (not rounded) after `digits` decimals, the way
/// the published tables present their values. Printing six extra digits
/// first keeps values such as 0.1229999999999 (an exact 0.123 after floating
/// point noise) from being cut to 0.122.
inline std::string format_truncated(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits + 6, x);
    std::string s(buf);
    return s.substr(0, s.size() - 6);
}

/// Fixed-point text rounded to `digits` decimals.
inline std::string format_fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

/// Text with enough digits to read back as the same double.
inline std::string format_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace blackjack
