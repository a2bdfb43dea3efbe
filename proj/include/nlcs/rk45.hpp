#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace nlcs {

inline double state_norm(double x) { return std::abs(x); }

struct Rk45Controls {
    double rtol = 1e-8;
    double atol = 1e-12;
    double h_initial = 1e-2;
    double h_max = 50.0;
    std::size_t max_steps = 5'000'000;
};

struct Rk45Outcome {
    bool stopped_by_observer = false;
    double t_final = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) with FSAL. State needs operator+, operator-,
/// scalar operator*, and an ADL-visible state_norm. The observer runs after
/// each accepted step as on_step(t, y, dydt, dydt_norm) -> bool and stops the
/// integration by returning true; dydt is the fresh derivative at (t, y).
template <class State, class Rhs, class Observer>
Rk45Outcome rk45_integrate(Rhs&& f, State& y, double t0, double t_max, const Rk45Controls& c,
                           Observer&& on_step) {
    if (c.rtol <= 0.0 || c.atol <= 0.0) throw std::invalid_argument("rk45: tolerances must be positive");

    Rk45Outcome out;
    double t = t0;
    double h = std::min(c.h_initial, c.h_max);
    State k1 = f(y);

    while (t < t_max && out.accepted + out.rejected < c.max_steps) {
        h = std::min(h, t_max - t);

        const State k2 = f(y + (h / 5.0) * k1);
        const State k3 = f(y + (3.0 * h / 40.0) * k1 + (9.0 * h / 40.0) * k2);
        const State k4 = f(y + (44.0 * h / 45.0) * k1 - (56.0 * h / 15.0) * k2 + (32.0 * h / 9.0) * k3);
        const State k5 = f(y + (19372.0 * h / 6561.0) * k1 - (25360.0 * h / 2187.0) * k2 +
                           (64448.0 * h / 6561.0) * k3 - (212.0 * h / 729.0) * k4);
        const State k6 = f(y + (9017.0 * h / 3168.0) * k1 - (355.0 * h / 33.0) * k2 +
                           (46732.0 * h / 5247.0) * k3 + (49.0 * h / 176.0) * k4 -
                           (5103.0 * h / 18656.0) * k5);
        const State y_new = y + (35.0 * h / 384.0) * k1 + (500.0 * h / 1113.0) * k3 +
                            (125.0 * h / 192.0) * k4 - (2187.0 * h / 6784.0) * k5 +
                            (11.0 * h / 84.0) * k6;
        const State k7 = f(y_new);

        const State err_state = (71.0 * h / 57600.0) * k1 - (71.0 * h / 16695.0) * k3 +
                                (71.0 * h / 1920.0) * k4 - (17253.0 * h / 339200.0) * k5 +
                                (22.0 * h / 525.0) * k6 - (h / 40.0) * k7;
        const double scale = c.atol + c.rtol * std::max(state_norm(y), state_norm(y_new));
        const double err = state_norm(err_state) / scale;

        if (err <= 1.0) {
            t += h;
            y = y_new;
            k1 = k7;  // FSAL
            ++out.accepted;
            if (on_step(t, y, k1, state_norm(k1))) {
                out.stopped_by_observer = true;
                break;
            }
        } else {
            ++out.rejected;
        }

        const double factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h = std::min(h * std::clamp(factor, 0.2, 5.0), c.h_max);
    }

    out.t_final = t;
    return out;
}

}  // namespace nlcs
