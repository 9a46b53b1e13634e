#pragma once

#include <cmath>
#include <concepts>

#include "strangle/errors.hpp"

namespace strangle {

// Bisection for a sign change of f on [lo, hi], stopping once the bracket is
// narrower than width. Returns the midpoint of the final bracket.
template <std::invocable<double> F>
double bisect(F&& f, double lo, double hi, double width, int max_iter = 400) {
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw ConvergenceError("bisect: root not bracketed");
    }
    for (int i = 0; i < max_iter && hi - lo > width; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
            return mid;
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if (hi - lo > width) {
        throw ConvergenceError("bisect: iteration limit reached");
    }
    return 0.5 * (lo + hi);
}

}  // namespace strangle
