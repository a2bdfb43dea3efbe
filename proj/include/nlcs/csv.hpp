#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace nlcs {

/// CSV cell format: '.' decimal, scientific notation once |x| < 1e-3,
/// "0" for exact zero, "nan" for flagged values.
inline std::string format_csv(double x) {
    if (std::isnan(x)) return "nan";
    if (x == 0.0) return "0";
    char buf[40];
    if (std::abs(x) < 1e-3) {
        std::snprintf(buf, sizeof(buf), "%.12e", x);
    } else {
        std::snprintf(buf, sizeof(buf), "%.12g", x);
    }
    return buf;
}

inline std::string format_csv(int x) { return std::to_string(x); }

}  // namespace nlcs
