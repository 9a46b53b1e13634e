#pragma once

#include <cmath>
#include <ostream>
#include <span>
#include <vector>

#include "strangle/bisect.hpp"
#include "strangle/delta_param.hpp"
#include "strangle/errors.hpp"
#include "strangle/format.hpp"
#include "strangle/normal.hpp"
#include "strangle/relative_value.hpp"

// Exit-strategy analytics for a short strangle that is bought back at a
// fraction lambda of the credit when it goes against the seller.
namespace strangle {

class ExitPolicy {
public:
    explicit ExitPolicy(double lambda) : lambda_(lambda) {
        if (!(lambda > 0.0 && lambda <= 1.0)) {
            throw DomainError("fractional loss lambda must lie in (0, 1]");
        }
    }

    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

struct StrategyOptimum {
    double lambda;
    double delta_star;
    double expected_reward;
    double success_prob;
};

// alpha * R - (1 - alpha) * lambda * R at finite nu.
inline double expected_relative_reward(double delta, ExitPolicy policy, double nu) {
    const DeltaNuPoint p(delta, nu);
    const double alpha = success_probability(p);
    const double rv = rv_closed(p);
    return alpha * rv - (1.0 - alpha) * policy.lambda() * rv;
}

// nu -> 0 version with alpha = 1 - 2 delta and R replaced by its bound.
inline double approx_expected_reward(double delta, ExitPolicy policy) {
    return (1.0 - 2.0 * delta * (1.0 + policy.lambda())) * bound(delta);
}

// delta (1 - z^2) - z phi(z); the maximiser of approx_expected_reward
// solves optimality_lhs(delta) = 1 / (2 (1 + lambda)). Increasing on (0, 0.5)
// from 0 to 0.5.
inline double optimality_lhs(double delta) {
    const double z = normal::quantile(delta);
    return delta * (1.0 - z * z) - z * normal::pdf(z);
}

inline constexpr double optimum_residual_tol = 1e-10;

inline StrategyOptimum optimal_delta(ExitPolicy policy) {
    const double target = 1.0 / (2.0 * (1.0 + policy.lambda()));
    const auto residual = [target](double d) { return optimality_lhs(d) - target; };
    const double delta_star = bisect(residual, 1e-6, 0.5 - 1e-6, 1e-12);
    if (std::abs(residual(delta_star)) > optimum_residual_tol) {
        throw ConvergenceError("optimal_delta: residual above tolerance");
    }
    // alpha uses the same nu -> 0 approximation as the reward.
    return {policy.lambda(), delta_star, approx_expected_reward(delta_star, policy), 1.0 - 2.0 * delta_star};
}

inline std::vector<double> default_lambdas() { return {0.25, 0.40, 0.50, 0.60, 0.75, 1.00}; }

inline std::vector<StrategyOptimum> strategy_table(std::span<const double> lambdas) {
    std::vector<StrategyOptimum> rows;
    rows.reserve(lambdas.size());
    for (double l : lambdas) {
        rows.push_back(optimal_delta(ExitPolicy(l)));
    }
    return rows;
}

inline void write_strategy_csv(std::ostream& os, std::span<const StrategyOptimum> rows, int decimals = 3) {
    os << "lambda,delta_star,expected_reward,success_prob\n";
    for (const auto& r : rows) {
        os << fmt::shortest(r.lambda) << ',' << fmt::fixed(r.delta_star, decimals) << ','
           << fmt::fixed(r.expected_reward, decimals) << ',' << fmt::fixed(r.success_prob, decimals) << '\n';
    }
}

}  // namespace strangle
