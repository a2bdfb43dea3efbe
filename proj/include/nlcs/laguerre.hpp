#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlcs {

/// Associated Laguerre polynomial L_n^m(x) for integer n >= 0, m >= 0, x >= 0.
///
/// Evaluated by the ascending three-term recurrence in the degree,
///   (n+1) L_{n+1}^m = (2n + m + 1 - x) L_n^m - (n + m) L_{n-1}^m,
/// which stays accurate where the alternating power series cancels badly.
inline double laguerre(int n, int m, double x) {
    if (n < 0 || m < 0) {
        throw std::domain_error("laguerre: require n >= 0 and m >= 0, got n=" +
                                std::to_string(n) + ", m=" + std::to_string(m));
    }
    if (x < 0.0) {
        throw std::domain_error("laguerre: require x >= 0, got x=" + std::to_string(x));
    }
    if (n == 0) return 1.0;
    double lm1 = 1.0;               // L_0^m
    double l = 1.0 + m - x;         // L_1^m
    for (int k = 1; k < n; ++k) {
        const double lp1 = ((2.0 * k + m + 1.0 - x) * l - (k + m) * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

}  // namespace nlcs
