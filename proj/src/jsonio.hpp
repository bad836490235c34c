#ifndef LOCKERLOC_SRC_JSONIO_HPP
#define LOCKERLOC_SRC_JSONIO_HPP

#include <cmath>
#include <cstdio>
#include <string>

namespace lockerloc::detail {

// Decimal form with 17 significant digits: round-trips binary64 exactly and
// is byte-stable for identical inputs.
inline std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

// gamma serializes as the string "inf" when infinite.
inline std::string format_gamma(double gamma) {
    if (std::isinf(gamma)) return "\"inf\"";
    return format_double(gamma);
}

} // namespace lockerloc::detail

#endif
