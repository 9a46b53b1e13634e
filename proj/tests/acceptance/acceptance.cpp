// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "strangle/black_scholes.hpp"
#include "strangle/chain.hpp"
#include "strangle/delta_param.hpp"
#include "strangle/normal.hpp"
#include "strangle/oracle.hpp"
#include "strangle/relative_value.hpp"
#include "strangle/strategy.hpp"

using namespace strangle;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string num(double v, int decimals = 6) { return fmt::fixed(v, decimals); }

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

Outcome bound_anchors() {
    const double b16 = bound(0.16);
    const double b30 = bound(0.30);
    const double b34 = bound(0.34);
    const bool ok = std::abs(b16 - 0.08467) <= 1e-4 && std::abs(b30 - 0.36) <= 5e-3 && std::abs(b34 - 0.548) <= 1e-3;
    return {ok, "bound(0.16)=" + num(b16) + " bound(0.30)=" + num(b30) + " bound(0.34)=" + num(b34)};
}

Outcome market_table() {
    std::ifstream in(STRANGLE_FIXTURE_DIR "/market_chain_20200513.csv");
    if (!in) {
        return {false, "cannot open chain fixture"};
    }
    const auto rows = chain::parse_chain(in);
    const std::map<std::string, double> targets = {{"SPY", 0.170}, {"LLY", 0.200}, {"BA", 0.210}, {"TLT", 0.255},
                                                   {"C", 0.295},   {"IBM", 0.340}, {"GOOG", 0.405}};
    struct Printed {
        double r_hat;
        double r_bar;
        bool consistent;
    };
    const std::map<std::string, Printed> printed = {
        {"SPY", {0.107, 0.095, false}}, {"LLY", {0.150, 0.133, true}}, {"BA", {0.156, 0.147, true}},
        {"TLT", {0.246, 0.232, true}},  {"C", {0.362, 0.345, false}},  {"IBM", {0.575, 0.548, true}},
        {"GOOG", {1.283, 1.207, true}}};
    const auto strangles = chain::benchmark_chain(rows, 0.2, targets);
    if (strangles.size() != printed.size()) {
        return {false, "expected 7 series, found " + std::to_string(strangles.size())};
    }
    double worst_bar = 0.0;
    double worst_hat = 0.0;
    std::string discrepant;
    for (const auto& s : strangles) {
        const auto& p = printed.at(s.call_row.ticker);
        const double recomputed = bound(targets.at(s.call_row.ticker));
        worst_bar = std::max(worst_bar, std::abs(recomputed - p.r_bar));
        if (p.consistent) {
            worst_hat = std::max(worst_hat, std::abs(s.r_hat - p.r_hat));
        } else {
            discrepant += " " + s.call_row.ticker + "=" + num(s.r_hat, 4) + "(printed " + num(p.r_hat, 3) + ")";
        }
    }
    const bool ok = worst_bar <= 1e-3 && worst_hat <= 1e-3;
    return {ok, "max |r_bar err|=" + sci(worst_bar) + " max |r_hat err| on 5 rows=" + sci(worst_hat) +
                    "; discrepant:" + discrepant};
}

Outcome strategy_reproduction() {
    struct Row {
        double lambda;
        double delta_star;
        double reward;
        double alpha;
    };
    const std::vector<Row> printed = {{0.25, 0.300, 0.091, 0.400}, {0.40, 0.256, 0.067, 0.489},
                                      {0.50, 0.234, 0.056, 0.533}, {0.60, 0.216, 0.048, 0.567},
                                      {0.75, 0.194, 0.040, 0.611}, {1.00, 0.164, 0.031, 0.670}};
    int matched = 0;
    double worst_residual = 0.0;
    std::string misses;
    for (const auto& p : printed) {
        const auto o = optimal_delta(ExitPolicy(p.lambda));
        const auto check = [&](const char* name, double got, double want, double tol) {
            if (std::abs(got - want) <= tol) {
                ++matched;
            } else {
                misses += std::string(" ") + name + "(" + num(p.lambda, 2) + ")=" + num(got, 4) + " vs " +
                          num(want, 3);
            }
        };
        check("delta*", o.delta_star, p.delta_star, 1e-3);
        check("E*", o.expected_reward, p.reward, 1e-3);
        check("alpha", o.success_prob, p.alpha, 2e-3);
        worst_residual =
            std::max(worst_residual, std::abs(optimality_lhs(o.delta_star) - 1.0 / (2.0 * (1.0 + p.lambda))));
    }
    const bool ok = matched == 18 && worst_residual <= 1e-10;
    return {ok, std::to_string(matched) + "/18 values matched, max residual=" + sci(worst_residual) +
                    (misses.empty() ? "" : "; misses:" + misses)};
}

Outcome optimum_anchor() {
    const auto o = optimal_delta(ExitPolicy(0.5));
    const bool ok = std::abs(o.delta_star - 0.2336) <= 5e-4 && std::abs(o.expected_reward - 0.05615) <= 1e-4;
    return {ok, "delta*=" + num(o.delta_star) + " E*=" + num(o.expected_reward)};
}

Outcome bound_properties() {
    const auto deltas = default_delta_axis();
    const auto grid = grid_points(deltas, default_nu_axis());
    std::size_t checked = 0;
    std::size_t bad = 0;
    for (const auto& p : grid) {
        if (!in_domain_B(p)) {
            continue;
        }
        ++checked;
        const double r = rv_closed(p);
        bad += (r >= 0.0 && r <= bound(p.delta()) + 1e-12) ? 0 : 1;
    }
    const auto report = monotonicity_report(grid);
    double worst_limit = 0.0;
    for (double d : deltas) {
        worst_limit = std::max(worst_limit, std::abs(rv_closed(DeltaNuPoint(d, 1e-6)) - bound(d)));
    }
    const bool ok = checked > 0 && bad == 0 && report.clean() && !report.empty() && worst_limit <= 1e-4;
    return {ok, std::to_string(checked) + " points in B, " + std::to_string(bad) + " outside [0, bound], " +
                    std::to_string(report.nu_checks + report.delta_checks) + " slope checks, " +
                    std::to_string(report.violations.size()) + " violations, max nu->0 gap=" + sci(worst_limit)};
}

Outcome route_equivalence() {
    double worst_ratio = 0.0;
    for (double mu : {1.0, 100.0, 1e4}) {
        for (double r : {0.0, 0.0002}) {
            for (double d = 0.05; d < 0.49; d += 0.05) {
                for (double nu : {0.05, 0.2, 0.5, 1.0}) {
                    const DeltaNuPoint p(d, nu);
                    if (!in_domain_B(p)) {
                        continue;
                    }
                    const MarketContext ctx(mu, nu / std::sqrt(30.0), 30.0, r);
                    worst_ratio = std::max(worst_ratio, std::abs(price_strangle(ctx, d).relative_value - rv_closed(p)));
                }
            }
        }
    }
    double worst_phi = 0.0;
    for (const auto& p : grid_points(default_delta_axis(), default_nu_axis(), true)) {
        worst_phi = std::max(worst_phi, std::abs(rv_phi_form(p) - rv_closed(p)));
    }
    const bool ok = worst_ratio <= 1e-10 && worst_phi <= 1e-12;
    return {ok, "price-ratio max diff=" + sci(worst_ratio) + ", pdf-form max diff=" + sci(worst_phi)};
}

Outcome oracle_equivalence() {
    double worst_quad = 0.0;
    const double mu = 100.0;
    for (double sigma : {0.005, 0.01, 0.02, 0.03, 0.05}) {
        for (double t : {1.0, 5.0, 23.0, 100.0, 250.0}) {
            const MarketContext ctx(mu, sigma, t, 0.0001);
            // strikes spaced by call delta so every price is resolvable
            for (double d : {0.05, 0.25, 0.5, 0.75, 0.95}) {
                const double k = strike_call(ctx, d);
                const double qc = oracle::price_by_quadrature(ctx, k, OptionRight::call);
                const double qp = oracle::price_by_quadrature(ctx, k, OptionRight::put);
                worst_quad = std::max(worst_quad, std::abs(qc / bs::call_price(ctx, k) - 1.0));
                worst_quad = std::max(worst_quad, std::abs(qp / bs::put_price(ctx, k) - 1.0));
            }
        }
    }

    std::mt19937_64 gen(20200513);
    std::uniform_real_distribution<double> ud(0.01, 0.49);
    std::uniform_real_distribution<double> un(0.01, 1.0);
    int within = 0;
    double worst_z = 0.0;
    for (int i = 0; i < 20;) {
        const DeltaNuPoint p(ud(gen), un(gen));
        if (!in_domain_B(p)) {
            continue;
        }
        const MarketContext ctx(100.0, p.nu() / std::sqrt(30.0), 30.0, 0.0);
        oracle::OracleConfig cfg;
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        const auto mc = oracle::prob_between_mc(ctx, strike_put(ctx, p.delta()), strike_call(ctx, p.delta()), cfg);
        const double z = std::abs(success_probability(p) - mc.value) / mc.std_error;
        worst_z = std::max(worst_z, z);
        within += z <= 3.0 ? 1 : 0;
        ++i;
    }
    const bool ok = worst_quad <= 1e-9 && within == 20;
    return {ok, "quadrature max rel err=" + sci(worst_quad) + " over 250 prices; alpha vs MC within 3 SE at " +
                    std::to_string(within) + "/20 points (max " + num(worst_z, 2) + " SE)"};
}

Outcome itm_probability() {
    std::size_t bad = 0;
    for (const auto& p : grid_points(default_delta_axis(), default_nu_axis())) {
        bad += prob_itm_call(p) <= p.delta() ? 0 : 1;
    }
    double worst = 0.0;
    for (double d : default_delta_axis()) {
        worst = std::max(worst, std::abs(prob_itm_call(DeltaNuPoint(d, 1e-8)) - d));
    }
    return {bad == 0 && worst <= 1e-7, std::to_string(bad) + " grid violations, max gap at nu=1e-8: " + sci(worst)};
}

Outcome derivative_check() {
    double worst = 0.0;
    const double h = 1e-6;
    for (double d : {0.1, 0.2, 0.3, 0.4}) {
        const double fd = (bound(d + h) - bound(d - h)) / (2.0 * h);
        worst = std::max(worst, std::abs(bound_derivative(d) / fd - 1.0));
    }
    return {worst <= 1e-6, "max rel diff=" + sci(worst)};
}

Outcome kernel_round_trip() {
    const double lo = std::log(1e-8);
    const double hi = std::log1p(-1e-8);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double p = std::exp(lo + (hi - lo) * i / 999.0);
        worst = std::max(worst, std::abs(normal::cdf(normal::quantile(p)) - p));
        const double q = 1.0 - p;
        if (q > 0.0) {
            worst = std::max(worst, std::abs(normal::cdf(normal::quantile(q)) - q));
        }
    }
    return {worst <= 1e-12, "max |cdf(quantile(p)) - p|=" + sci(worst)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "bound anchors", 1.0, bound_anchors},
        {2, "market table", 1.0, market_table},
        {3, "optimal strategy table", 1.0, strategy_reproduction},
        {4, "optimum anchor at lambda=0.5", 1.0, optimum_anchor},
        {5, "bound and monotonicity over B", 5.0, bound_properties},
        {6, "route equivalence", 5.0, route_equivalence},
        {7, "oracle equivalence", 60.0, oracle_equivalence},
        {8, "ITM probability below delta", 1.0, itm_probability},
        {9, "bound derivative", 1.0, derivative_check},
        {10, "normal kernel round trip", 1.0, kernel_round_trip},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_seconds;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("criterion %2d %s: %s: %s [%.3f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                    secs, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
