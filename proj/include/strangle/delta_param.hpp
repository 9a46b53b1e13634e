#pragma once

#include <cmath>

#include "strangle/black_scholes.hpp"
#include "strangle/errors.hpp"
#include "strangle/normal.hpp"

// Delta/nu parameterization of Black-Scholes strikes and prices.
//
// For a target delta d with z = quantile(d) and nu = sigma * sqrt(t):
//   call strike  k+ = mu * exp(-z nu + nu^2/2 + r t)
//   put strike   k- = mu * exp( z nu + nu^2/2 + r t)
// and the option prices collapse to mu times a function of (d, nu) only.
namespace strangle {

// A point of the strangle parameter space, 0 < delta < 0.5 and nu > 0.
class DeltaNuPoint {
public:
    DeltaNuPoint(double delta, double nu) : delta_(delta), nu_(nu) {
        if (!(delta > 0.0 && delta < 0.5)) {
            throw DomainError("strangle delta must lie in (0, 0.5)");
        }
        if (!(std::isfinite(nu) && nu > 0.0)) {
            throw DomainError("nu must be positive");
        }
        z_ = normal::quantile(delta);
    }

    double delta() const noexcept { return delta_; }
    double nu() const noexcept { return nu_; }
    // quantile(delta), always negative.
    double z() const noexcept { return z_; }

    friend bool operator==(const DeltaNuPoint& a, const DeltaNuPoint& b) noexcept {
        return a.delta_ == b.delta_ && a.nu_ == b.nu_;
    }

private:
    double delta_;
    double nu_;
    double z_;
};

struct StrikePair {
    double k_minus;  // put strike
    double k_plus;   // call strike
};

// Both legs out of the money (at r = 0): delta < Phi(-nu/2). The boundary
// itself is excluded.
inline bool in_domain_B(const DeltaNuPoint& p) noexcept { return p.delta() < normal::cdf(-0.5 * p.nu()); }

namespace detail {
inline double checked_z(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw DomainError("delta must lie in (0, 1)");
    }
    return normal::quantile(delta);
}
}  // namespace detail

inline double strike_call(const MarketContext& ctx, double delta) {
    const double z = detail::checked_z(delta);
    const double nu = ctx.nu();
    return ctx.mu() * std::exp(-z * nu + 0.5 * nu * nu + ctx.r() * ctx.t());
}

inline double strike_put(const MarketContext& ctx, double delta) {
    const double z = detail::checked_z(delta);
    const double nu = ctx.nu();
    return ctx.mu() * std::exp(z * nu + 0.5 * nu * nu + ctx.r() * ctx.t());
}

inline StrikePair strikes(const MarketContext& ctx, double delta) {
    return {strike_put(ctx, delta), strike_call(ctx, delta)};
}

inline double call_price_dn(const MarketContext& ctx, double delta) {
    const double z = detail::checked_z(delta);
    const double nu = ctx.nu();
    return ctx.mu() * (delta - std::exp(-z * nu + 0.5 * nu * nu) * normal::cdf(z - nu));
}

inline double put_price_dn(const MarketContext& ctx, double delta) {
    const double z = detail::checked_z(delta);
    const double nu = ctx.nu();
    return -ctx.mu() * (delta - std::exp(z * nu + 0.5 * nu * nu) * normal::cdf(z + nu));
}

// Risk-neutral probability that the delta call finishes in the money. Never
// exceeds delta and tends to it as nu -> 0.
inline double prob_itm_call(const DeltaNuPoint& p) noexcept { return normal::cdf(p.z() - p.nu()); }

}  // namespace strangle
