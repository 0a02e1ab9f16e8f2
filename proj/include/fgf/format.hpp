#pragma once

#include <charconv>
#include <string>

namespace fgf {

/// Locale-independent decimal formatting, 17 significant digits.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace fgf
