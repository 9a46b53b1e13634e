#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "strangle/black_scholes.hpp"
#include "strangle/chain.hpp"
#include "strangle/delta_param.hpp"
#include "strangle/errors.hpp"
#include "strangle/format.hpp"
#include "strangle/relative_value.hpp"
#include "strangle/strategy.hpp"

// Command-line front end. Exit codes: 0 success, 1 input-file problems,
// 2 bad flags or arguments outside an operation's domain.
namespace strangle::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 1;
inline constexpr int exit_usage = 2;

inline constexpr int scalar_decimals = 6;

namespace detail {

// Daily sigma from either --sigma or --iv (mutually exclusive).
inline double resolve_sigma(const std::optional<double>& sigma, const std::optional<double>& iv) {
    if (sigma) {
        return *sigma;
    }
    if (iv) {
        return daily_sigma_from_annual(*iv);
    }
    throw DomainError("one of --sigma or --iv is required");
}

inline std::map<std::string, double> parse_targets(const std::vector<std::string>& specs) {
    std::map<std::string, double> targets;
    for (const auto& s : specs) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
            throw DomainError("--target expects TICKER=DELTA, got '" + s + "'");
        }
        double value = 0.0;
        const std::string num = s.substr(eq + 1);
        const auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
        if (ec != std::errc{} || end != num.data() + num.size()) {
            throw DomainError("--target: bad delta in '" + s + "'");
        }
        targets[s.substr(0, eq)] = value;
    }
    return targets;
}

class OutputSink {
public:
    OutputSink(const std::optional<std::string>& path, std::ostream& fallback) : os_(&fallback) {
        if (path && *path != "-") {
            file_.open(*path);
            if (!file_) {
                throw std::ios_base::failure("cannot open '" + *path + "' for writing");
            }
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

}  // namespace detail

// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relative value of delta-symmetric strangles under Black-Scholes", "strangle"};
    app.require_subcommand(1, 1);

    double delta = 0.0;
    std::optional<double> nu;
    std::optional<double> sigma;
    std::optional<double> iv;
    std::optional<double> days;
    double mu = 0.0;
    double rate = 0.0;
    double lambda = 0.0;
    std::vector<double> lambdas = default_lambdas();
    int decimals = 3;
    std::string file;
    std::optional<double> chain_delta;
    std::vector<std::string> target_specs;
    std::optional<std::string> out_path;
    std::string curve;
    std::optional<double> curve_lambda;
    unsigned workers = 1;

    auto* bound_cmd = app.add_subcommand("bound", "Upper bound of the relative value at a delta");
    bound_cmd->add_option("--delta", delta, "Strangle delta in (0, 0.5)")->required();

    auto* rv_cmd = app.add_subcommand("rv", "Relative value, bound and success probability");
    rv_cmd->add_option("--delta", delta, "Strangle delta in (0, 0.5)")->required();
    auto* rv_nu = rv_cmd->add_option("--nu", nu, "Volatility over the horizon, sigma * sqrt(days)");
    auto* rv_sigma = rv_cmd->add_option("--sigma", sigma, "Daily volatility");
    auto* rv_iv = rv_cmd->add_option("--iv", iv, "Annualized implied volatility, converted with sqrt(365)");
    auto* rv_days = rv_cmd->add_option("--days", days, "Days to expiry");
    rv_sigma->excludes(rv_iv);
    rv_nu->excludes(rv_sigma)->excludes(rv_iv)->excludes(rv_days);

    auto* price_cmd = app.add_subcommand("price", "Strikes, leg prices and relative value in a market");
    price_cmd->add_option("--mu", mu, "Underlying price")->required();
    auto* price_sigma = price_cmd->add_option("--sigma", sigma, "Daily volatility");
    auto* price_iv = price_cmd->add_option("--iv", iv, "Annualized implied volatility");
    price_sigma->excludes(price_iv);
    price_cmd->add_option("--days", days, "Days to expiry")->required();
    price_cmd->add_option("--rate", rate, "Per-day risk-free rate")->capture_default_str();
    price_cmd->add_option("--delta", delta, "Strangle delta in (0, 0.5)")->required();

    auto* opt_cmd = app.add_subcommand("optimal-delta", "Delta maximizing the expected relative reward");
    opt_cmd->add_option("--lambda", lambda, "Fractional loss at exit, in (0, 1]")->required();

    auto* table_cmd = app.add_subcommand("strategy-table", "Optimal delta for several exit fractions (CSV)");
    table_cmd->add_option("--lambdas", lambdas, "Comma-separated fractional losses")->delimiter(',');
    table_cmd->add_option("--decimals", decimals, "Decimals for the table columns")->capture_default_str();

    auto* chain_cmd = app.add_subcommand("chain-benchmark", "Market relative value of strangles in a chain (CSV)");
    chain_cmd->add_option("--file", file, "Chain CSV, '-' for stdin")->required();
    chain_cmd->add_option("--delta", chain_delta, "Target delta for every series");
    chain_cmd->add_option("--target", target_specs, "Per-ticker target, TICKER=DELTA (repeatable)");
    chain_cmd->add_option("--rate", rate, "Per-day risk-free rate")->capture_default_str();

    auto* surface_cmd = app.add_subcommand("surface", "Relative value grid or curves (CSV)");
    surface_cmd->add_option("--out", out_path, "Output file, stdout when omitted");
    surface_cmd->add_option("--curve", curve, "bound or reward; full grid when omitted")
        ->check(CLI::IsMember({"bound", "reward"}));
    surface_cmd->add_option("--lambda", curve_lambda, "Fractional loss for the reward curve");
    surface_cmd->add_option("--workers", workers, "Threads for the grid")->capture_default_str();

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const auto fixed = [](double v) { return fmt::fixed(v, scalar_decimals); };

    try {
        if (*bound_cmd) {
            out << fixed(bound(delta)) << '\n';
        } else if (*rv_cmd) {
            double horizon_nu = 0.0;
            if (nu) {
                horizon_nu = *nu;
            } else {
                if (!days) {
                    throw DomainError("rv: give --nu, or --days with --sigma or --iv");
                }
                horizon_nu = MarketContext(1.0, detail::resolve_sigma(sigma, iv), *days).nu();
            }
            const DeltaNuPoint p(delta, horizon_nu);
            out << "rv=" << fixed(rv_closed(p)) << " bound=" << fixed(bound(delta))
                << " alpha=" << fixed(success_probability(p)) << '\n';
        } else if (*price_cmd) {
            const MarketContext ctx(mu, detail::resolve_sigma(sigma, iv), *days, rate);
            const auto s = price_strangle(ctx, delta);
            out << "k_minus=" << fixed(s.k_minus) << '\n'
                << "k_plus=" << fixed(s.k_plus) << '\n'
                << "put=" << fixed(s.price_put) << '\n'
                << "call=" << fixed(s.price_call) << '\n'
                << "total=" << fixed(s.total) << '\n'
                << "rv=" << fixed(s.relative_value) << '\n'
                << "bound=" << fixed(bound(delta)) << '\n';
        } else if (*opt_cmd) {
            const auto o = optimal_delta(ExitPolicy(lambda));
            out << "delta_star=" << fixed(o.delta_star) << " expected_reward=" << fixed(o.expected_reward)
                << " success_prob=" << fixed(o.success_prob) << '\n';
        } else if (*table_cmd) {
            if (decimals < 0 || decimals > 17) {
                throw DomainError("--decimals must lie in [0, 17]");
            }
            const auto rows = strategy_table(lambdas);
            write_strategy_csv(out, rows, decimals);
        } else if (*chain_cmd) {
            const auto targets = detail::parse_targets(target_specs);
            std::vector<chain::ChainRow> rows;
            try {
                if (file == "-") {
                    rows = chain::parse_chain(in);
                } else {
                    std::ifstream f(file);
                    if (!f) {
                        err << "chain-benchmark: cannot open '" << file << "'\n";
                        return exit_input;
                    }
                    rows = chain::parse_chain(f);
                }
            } catch (const ParseError& e) {
                err << "chain-benchmark: " << file << ": " << e.what() << '\n';
                return exit_input;
            }
            std::vector<chain::MarketStrangle> strangles;
            for (const auto& series : chain::split_series(rows)) {
                const auto it = targets.find(series.front().ticker);
                if (it == targets.end() && !chain_delta) {
                    throw DomainError("no target delta for " + series.front().ticker + "; pass --delta or --target");
                }
                strangles.push_back(chain::select_strangle(series, it != targets.end() ? it->second : *chain_delta, rate));
            }
            chain::benchmark_report(out, strangles);
        } else if (*surface_cmd) {
            if (curve != "reward" && curve_lambda) {
                throw DomainError("--lambda only applies to --curve reward");
            }
            detail::OutputSink sink(out_path, out);
            auto& os = sink.stream();
            const auto deltas = default_delta_axis();
            if (curve.empty()) {
                write_surface_csv(os, evaluate_surface(deltas, default_nu_axis(), workers));
            } else {
                std::optional<ExitPolicy> policy;
                if (curve == "reward") {
                    if (!curve_lambda) {
                        throw DomainError("--curve reward requires --lambda");
                    }
                    policy.emplace(*curve_lambda);
                }
                os << "delta,value\n";
                for (double d : deltas) {
                    const double v = policy ? approx_expected_reward(d, *policy) : bound(d);
                    os << fmt::shortest(d) << ',' << fmt::shortest(v) << '\n';
                }
            }
            os.flush();
            if (!os) {
                err << "surface: write failed\n";
                return exit_input;
            }
        }
    } catch (const DomainError& e) {
        err << app.get_subcommands().front()->get_name() << ": " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << app.get_subcommands().front()->get_name() << ": " << e.what() << '\n';
        return exit_input;
    }
    return exit_ok;
}

}  // namespace strangle::cli
