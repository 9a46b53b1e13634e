#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "strangle/black_scholes.hpp"
#include "strangle/errors.hpp"
#include "strangle/normal.hpp"

// Brute-force references for the closed forms: Simpson quadrature of the
// discounted payoff against the lognormal terminal density, and Monte Carlo
// over the same terminal distribution.
namespace strangle::oracle {

struct OracleConfig {
    std::uint64_t mc_paths = 10'000'000;
    int quadrature_points = 2001;
    std::uint64_t seed = 0x5DEECE66DULL;

    void validate() const {
        if (mc_paths < 10'000) {
            throw DomainError("oracle config: mc_paths must be at least 10^4");
        }
        if (quadrature_points < 101 || quadrature_points % 2 == 0) {
            throw DomainError("oracle config: quadrature_points must be odd and at least 101");
        }
    }
};

struct McEstimate {
    double value;
    double std_error;
};

// Counter-based generator: the i-th draw is a SplitMix64 hash of (seed, i),
// so any path can be regenerated without replaying the ones before it.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed)) {}

    std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix(key_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
    }

    // Uniform on the open interval (0, 1).
    double uniform(std::uint64_t counter) const noexcept {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1p-53;
    }

    double normal(std::uint64_t counter) const { return normal::quantile(uniform(counter)); }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

namespace detail {

inline constexpr double truncation_sd = 10.0;

inline double std_normal_density(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

template <class F>
double simpson(F&& f, double a, double b, int points) {
    const int intervals = points - 1;
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    }
    return sum * h / 3.0;
}

inline constexpr std::uint64_t batch_paths = 1ULL << 16;

// Runs per_batch(first_path, last_path) over fixed-size batches on all
// hardware threads and returns the per-batch results in batch order; the
// caller reduces them sequentially so the total does not depend on threading.
template <class Result, class F>
std::vector<Result> run_batches(std::uint64_t paths, F per_batch) {
    const std::uint64_t batches = (paths + batch_paths - 1) / batch_paths;
    std::vector<Result> results(batches);
    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, batches));
    const auto work = [&](unsigned w) {
        for (std::uint64_t b = w; b < batches; b += workers) {
            results[b] = per_batch(b * batch_paths, std::min(paths, (b + 1) * batch_paths));
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }
    return results;
}

inline double terminal_price(const MarketContext& ctx, double z) noexcept {
    const double sigma = ctx.sigma();
    return ctx.mu() * std::exp((ctx.r() - 0.5 * sigma * sigma) * ctx.t() + ctx.nu() * z);
}

}  // namespace detail

// e^{-rt} E[payoff(S_T)] with log S_T ~ N(log mu + (r - sigma^2/2) t, nu^2),
// integrated in standardized log-price over +-10 standard deviations. The
// range is split at the strike so the payoff is smooth on the integration
// interval.
inline double price_by_quadrature(const MarketContext& ctx, double k, OptionRight right,
                                  const OracleConfig& cfg = {}) {
    cfg.validate();
    if (!(std::isfinite(k) && k > 0.0)) {
        throw DomainError("price_by_quadrature: strike must be positive");
    }
    const double sigma = ctx.sigma();
    const double drift = std::log(ctx.mu()) + (ctx.r() - 0.5 * sigma * sigma) * ctx.t();
    const double nu = ctx.nu();
    const double x_strike = (std::log(k) - drift) / nu;
    const double lo = -detail::truncation_sd;
    const double hi = detail::truncation_sd;

    const auto spot = [&](double x) { return std::exp(drift + nu * x); };
    double expectation = 0.0;
    if (right == OptionRight::call) {
        const double a = std::max(x_strike, lo);
        if (a < hi) {
            expectation = detail::simpson([&](double x) { return (spot(x) - k) * detail::std_normal_density(x); }, a,
                                          hi, cfg.quadrature_points);
        }
    } else {
        const double b = std::min(x_strike, hi);
        if (b > lo) {
            expectation = detail::simpson([&](double x) { return (k - spot(x)) * detail::std_normal_density(x); },
                                          lo, b, cfg.quadrature_points);
        }
    }
    return ctx.discount() * expectation;
}

// P(k_lo < S_T < k_hi) under the risk-neutral lognormal law. k_lo = 0 and
// k_hi = +infinity are accepted as open-ended sentinels.
inline McEstimate prob_between_mc(const MarketContext& ctx, double k_lo, double k_hi, const OracleConfig& cfg = {}) {
    cfg.validate();
    if (!(k_lo >= 0.0 && k_lo < k_hi)) {
        throw DomainError("prob_between_mc: need 0 <= k_lo < k_hi");
    }
    const CounterRng rng(cfg.seed);
    const auto counts = detail::run_batches<std::uint64_t>(cfg.mc_paths, [&](std::uint64_t first, std::uint64_t last) {
        std::uint64_t inside = 0;
        for (std::uint64_t i = first; i < last; ++i) {
            const double s = detail::terminal_price(ctx, rng.normal(i));
            inside += (s > k_lo && s < k_hi) ? 1 : 0;
        }
        return inside;
    });
    std::uint64_t inside = 0;
    for (auto c : counts) {
        inside += c;
    }
    const double n = static_cast<double>(cfg.mc_paths);
    const double p = static_cast<double>(inside) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

// Discounted payoff mean and its standard error.
inline McEstimate price_by_mc(const MarketContext& ctx, double k, OptionRight right, const OracleConfig& cfg = {}) {
    cfg.validate();
    if (!(std::isfinite(k) && k > 0.0)) {
        throw DomainError("price_by_mc: strike must be positive");
    }
    struct Moments {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    const CounterRng rng(cfg.seed);
    const auto parts = detail::run_batches<Moments>(cfg.mc_paths, [&](std::uint64_t first, std::uint64_t last) {
        Moments m;
        for (std::uint64_t i = first; i < last; ++i) {
            const double s = detail::terminal_price(ctx, rng.normal(i));
            const double payoff = right == OptionRight::call ? std::max(s - k, 0.0) : std::max(k - s, 0.0);
            m.sum += payoff;
            m.sum_sq += payoff * payoff;
        }
        return m;
    });
    Moments total;
    for (const auto& m : parts) {
        total.sum += m.sum;
        total.sum_sq += m.sum_sq;
    }
    const double n = static_cast<double>(cfg.mc_paths);
    const double mean = total.sum / n;
    const double var = std::max(total.sum_sq / n - mean * mean, 0.0) * n / (n - 1.0);
    return {ctx.discount() * mean, ctx.discount() * std::sqrt(var / n)};
}

}  // namespace strangle::oracle
