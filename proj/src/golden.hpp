#pragma once

#include <cmath>

namespace sinespike::detail {

// Golden-section search for a maximizer of a unimodal f on [a, b].
template <class F>
double golden_max(F&& f, double a, double b, double tol = 1e-14, int max_iters = 200) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iters && (b - a) > tol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

} // namespace sinespike::detail
