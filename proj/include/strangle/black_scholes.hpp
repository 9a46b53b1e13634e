#pragma once

#include <cmath>
#include <string_view>

#include "strangle/errors.hpp"
#include "strangle/normal.hpp"

namespace strangle {

enum class OptionRight { call, put };

// Black-Scholes inputs in per-day units: sigma is the standard deviation of
// daily returns, t counts days and r is a per-day continuously compounded rate.
class MarketContext {
public:
    MarketContext(double mu, double sigma, double t, double r = 0.0) : mu_(mu), sigma_(sigma), t_(t), r_(r) {
        if (!(std::isfinite(mu) && mu > 0.0)) {
            throw DomainError("market context: underlying price must be positive");
        }
        if (!(std::isfinite(sigma) && sigma > 0.0)) {
            throw DomainError("market context: daily volatility must be positive");
        }
        if (!(std::isfinite(t) && t > 0.0)) {
            throw DomainError("market context: days to expiry must be positive");
        }
        if (!(std::isfinite(r) && r >= 0.0)) {
            throw DomainError("market context: risk-free rate must be non-negative");
        }
    }

    double mu() const noexcept { return mu_; }
    double sigma() const noexcept { return sigma_; }
    double t() const noexcept { return t_; }
    double r() const noexcept { return r_; }

    // Volatility over the life of the option, sigma * sqrt(t).
    double nu() const noexcept { return sigma_ * std::sqrt(t_); }
    double discount() const noexcept { return std::exp(-r_ * t_); }

private:
    double mu_;
    double sigma_;
    double t_;
    double r_;
};

// Daily volatility from an annualized implied volatility quoted on a
// 365-day calendar.
inline double daily_sigma_from_annual(double iv) {
    if (!(std::isfinite(iv) && iv > 0.0)) {
        throw DomainError("implied volatility must be positive");
    }
    return iv / std::sqrt(365.0);
}

struct D1D2 {
    double d1;
    double d2;
};

namespace bs {

namespace detail {
inline void check_strike(double k, std::string_view op) {
    if (!(std::isfinite(k) && k > 0.0)) {
        throw DomainError(std::string(op) + ": strike must be positive");
    }
}
}  // namespace detail

inline D1D2 d_terms(const MarketContext& ctx, double k) {
    detail::check_strike(k, "d_terms");
    const double nu = ctx.nu();
    const double sigma = ctx.sigma();
    const double d1 = (std::log(ctx.mu() / k) + (ctx.r() + 0.5 * sigma * sigma) * ctx.t()) / nu;
    return {d1, d1 - nu};
}

inline double call_price(const MarketContext& ctx, double k) {
    detail::check_strike(k, "call_price");
    const auto [d1, d2] = d_terms(ctx, k);
    return ctx.mu() * normal::cdf(d1) - k * ctx.discount() * normal::cdf(d2);
}

// 1 - Phi(d1) is evaluated as Phi(-d1) so deep out-of-the-money puts keep
// their relative precision.
inline double put_price(const MarketContext& ctx, double k) {
    detail::check_strike(k, "put_price");
    const auto [d1, d2] = d_terms(ctx, k);
    return k * ctx.discount() * normal::cdf(-d2) - ctx.mu() * normal::cdf(-d1);
}

inline double price(const MarketContext& ctx, double k, OptionRight right) {
    return right == OptionRight::call ? call_price(ctx, k) : put_price(ctx, k);
}

inline double delta_call(const MarketContext& ctx, double k) {
    detail::check_strike(k, "delta_call");
    return normal::cdf(d_terms(ctx, k).d1);
}

inline double delta_put(const MarketContext& ctx, double k) {
    detail::check_strike(k, "delta_put");
    return -normal::cdf(-d_terms(ctx, k).d1);
}

inline double delta(const MarketContext& ctx, double k, OptionRight right) {
    return right == OptionRight::call ? delta_call(ctx, k) : delta_put(ctx, k);
}

}  // namespace bs
}  // namespace strangle
