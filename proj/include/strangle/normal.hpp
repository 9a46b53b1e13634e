#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "strangle/errors.hpp"

// Standard normal density, distribution and quantile functions.
namespace strangle::normal {

inline constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;
inline constexpr double sqrt_2pi = 2.50662827463100050241576528481;

inline double pdf(double z) noexcept { return inv_sqrt_2pi * std::exp(-0.5 * z * z); }

// erfc keeps full relative precision in the lower tail, where 1 + erf would not.
inline double cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

namespace detail {

// Acklam's rational approximation (relative error < 1.15e-9) for p in (0, 0.5].
inline double quantile_seed(double p) noexcept {
    static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                                -2.759285104469687e+02, 1.383577518672690e+02,
                                                -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                                -1.556989798598866e+02, 6.680131188771972e+01,
                                                -1.328068155288572e+01};
    static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                                -2.400758277161838e+00, -2.549732539343734e+00,
                                                4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double s = q * q;
    return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * q /
           (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
}

// Seed plus one Halley step on cdf(x) - p.
inline double quantile_lower(double p) noexcept {
    const double x = quantile_seed(p);
    const double density = pdf(x);
    if (density == 0.0) {
        return x;
    }
    const double u = (cdf(x) - p) / density;
    return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace detail

// Inverse of cdf. The upper half is evaluated by reflection; 1 - p is exact
// there, so quantile(p) == -quantile(1 - p) whenever 1 - p is representable.
inline double quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("quantile: probability must lie in (0, 1)");
    }
    return p <= 0.5 ? detail::quantile_lower(p) : -detail::quantile_lower(1.0 - p);
}

}  // namespace strangle::normal
