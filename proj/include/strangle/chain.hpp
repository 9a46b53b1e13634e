#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "strangle/black_scholes.hpp"
#include "strangle/errors.hpp"
#include "strangle/format.hpp"
#include "strangle/relative_value.hpp"

// Option-chain snapshots: CSV ingestion, delta-symmetric strangle selection
// and benchmarking of the market relative value against the model bound.
namespace strangle::chain {

inline constexpr std::string_view csv_header = "ticker,underlying,days,strike,right,bid,ask,delta,iv";
inline constexpr std::string_view report_header = "ticker,mu,iv,days,delta,k1,k2,price,r_hat,r_bar,verdict";

struct ChainRow {
    std::string ticker;
    double underlying = 0.0;
    int days = 0;
    double strike = 0.0;
    OptionRight right = OptionRight::call;
    double bid = 0.0;
    double ask = 0.0;
    std::optional<double> delta;  // signed: calls in (0, 1), puts in (-1, 0)
    std::optional<double> iv;     // annualized

    double mid() const noexcept { return 0.5 * (bid + ask); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

inline double parse_real(std::string_view field, std::size_t line, std::size_t column, std::string_view name) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size() || !std::isfinite(value)) {
        throw ParseError(line, column, std::string(name) + ": not a number '" + std::string(field) + "'");
    }
    return value;
}

inline std::optional<double> parse_optional_real(std::string_view field, std::size_t line, std::size_t column,
                                                 std::string_view name) {
    if (field.empty()) {
        return std::nullopt;
    }
    return parse_real(field, line, column, name);
}

inline int parse_days(std::string_view field, std::size_t line, std::size_t column) {
    int value = 0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
        throw ParseError(line, column, "days: not an integer '" + std::string(field) + "'");
    }
    if (value < 1) {
        throw ParseError(line, column, "days: must be at least 1");
    }
    return value;
}

inline OptionRight parse_right(std::string_view field, std::size_t line, std::size_t column) {
    if (field == "C" || field == "c") {
        return OptionRight::call;
    }
    if (field == "P" || field == "p") {
        return OptionRight::put;
    }
    throw ParseError(line, column, "right: expected C or P, got '" + std::string(field) + "'");
}

inline ChainRow parse_row(std::string_view text, std::size_t line) {
    const auto f = split(text);
    if (f.size() != 9) {
        throw ParseError(line, 0, "expected 9 fields, found " + std::to_string(f.size()));
    }
    ChainRow row;
    row.ticker = std::string(f[0]);
    if (row.ticker.empty()) {
        throw ParseError(line, 1, "ticker: empty");
    }
    row.underlying = parse_real(f[1], line, 2, "underlying");
    if (row.underlying <= 0.0) {
        throw ParseError(line, 2, "underlying: must be positive");
    }
    row.days = parse_days(f[2], line, 3);
    row.strike = parse_real(f[3], line, 4, "strike");
    if (row.strike <= 0.0) {
        throw ParseError(line, 4, "strike: must be positive");
    }
    row.right = parse_right(f[4], line, 5);
    row.bid = parse_real(f[5], line, 6, "bid");
    if (row.bid < 0.0) {
        throw ParseError(line, 6, "bid: must be non-negative");
    }
    row.ask = parse_real(f[6], line, 7, "ask");
    if (row.ask < row.bid) {
        throw ParseError(line, 7, "crossed quote: ask below bid");
    }
    row.delta = parse_optional_real(f[7], line, 8, "delta");
    if (row.delta) {
        const double d = *row.delta;
        const bool ok = row.right == OptionRight::call ? (d > 0.0 && d < 1.0) : (d > -1.0 && d < 0.0);
        if (!ok) {
            throw ParseError(line, 8,
                             row.right == OptionRight::call ? "delta: call delta must lie in (0, 1)"
                                                            : "delta: put delta must lie in (-1, 0)");
        }
    }
    row.iv = parse_optional_real(f[8], line, 9, "iv");
    if (row.iv && *row.iv <= 0.0) {
        throw ParseError(line, 9, "iv: must be positive");
    }
    return row;
}

}  // namespace detail

// Reads `ticker,underlying,days,strike,right,bid,ask,delta,iv`. Blank lines
// are skipped; the first malformed line aborts with its line and column.
inline std::vector<ChainRow> parse_chain(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(1, 0, "empty input");
    }
    std::string_view header = line;
    if (header.starts_with("\xEF\xBB\xBF")) {
        header.remove_prefix(3);
    }
    if (detail::trim(header) != csv_header) {
        throw ParseError(1, 0, "unexpected header, expected '" + std::string(csv_header) + "'");
    }
    std::vector<ChainRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        rows.push_back(detail::parse_row(line, line_no));
    }
    return rows;
}

// Black-Scholes delta of a quote from its annualized implied volatility.
inline double infer_delta(const ChainRow& row, double r = 0.0) {
    if (!row.iv) {
        throw SelectionError(row.ticker + " " + fmt::shortest(row.strike) + ": no implied volatility to infer delta");
    }
    const MarketContext ctx(row.underlying, daily_sigma_from_annual(*row.iv), row.days, r);
    return bs::delta(ctx, row.strike, row.right);
}

inline double effective_delta(const ChainRow& row, double r) {
    if (row.delta) {
        return *row.delta;
    }
    if (!row.iv) {
        throw SelectionError(row.ticker + " " + fmt::shortest(row.strike) +
                             ": neither a quoted delta nor an implied volatility");
    }
    return infer_delta(row, r);
}

enum class Verdict { well_priced, below_bound };

inline std::string_view to_string(Verdict v) { return v == Verdict::well_priced ? "well_priced" : "below_bound"; }

struct MarketStrangle {
    ChainRow put_row;
    ChainRow call_row;
    double put_delta;   // achieved, signed
    double call_delta;  // achieved
    double target_delta;
    double rate;
    double mid_total;
    double spread;
    double r_hat;
    double r_bar;
    Verdict verdict;
};

// Picks the put whose delta is closest to -target and the call closest to
// +target (ties go to the strike nearer the underlying), then prices the
// strangle at mid.
inline MarketStrangle select_strangle(std::span<const ChainRow> rows, double target_delta, double r = 0.0) {
    if (!(target_delta > 0.0 && target_delta < 0.5)) {
        throw DomainError("target delta must lie in (0, 0.5)");
    }
    if (!(std::isfinite(r) && r >= 0.0)) {
        throw DomainError("risk-free rate must be non-negative");
    }
    if (rows.empty()) {
        throw SelectionError("empty chain");
    }
    const ChainRow& first = rows.front();
    for (const auto& row : rows) {
        if (row.ticker != first.ticker || row.days != first.days || row.underlying != first.underlying) {
            throw SelectionError("chain mixes tickers or expiries; select one series at a time");
        }
    }

    struct Pick {
        const ChainRow* row = nullptr;
        double delta = 0.0;
        double distance = std::numeric_limits<double>::infinity();
    };
    const auto better = [&](const ChainRow& row, double distance, const Pick& current) {
        if (current.row == nullptr || distance < current.distance) {
            return true;
        }
        return distance == current.distance && std::abs(row.strike - row.underlying) <
                                                    std::abs(current.row->strike - current.row->underlying);
    };

    Pick put;
    Pick call;
    for (const auto& row : rows) {
        const double d = effective_delta(row, r);
        const bool is_call = row.right == OptionRight::call;
        const double distance = std::abs(d - (is_call ? target_delta : -target_delta));
        Pick& slot = is_call ? call : put;
        if (better(row, distance, slot)) {
            slot = {&row, d, distance};
        }
    }
    if (put.row == nullptr) {
        throw SelectionError(first.ticker + ": no put candidate");
    }
    if (call.row == nullptr) {
        throw SelectionError(first.ticker + ": no call candidate");
    }
    const double spread = call.row->strike - put.row->strike;
    if (!(spread > 0.0)) {
        throw SelectionError(first.ticker + ": selected call strike is not above the put strike");
    }

    const double mid_total = put.row->mid() + call.row->mid();
    const double r_hat = mid_total / (spread * std::exp(-r * first.days));
    const double r_bar = bound(target_delta);
    return {*put.row, *call.row,  put.delta, call.delta, target_delta, r,
            mid_total, spread,    r_hat,     r_bar,      r_hat >= r_bar ? Verdict::well_priced : Verdict::below_bound};
}

// Splits a multi-ticker chain into (ticker, days) series in order of first
// appearance.
inline std::vector<std::vector<ChainRow>> split_series(std::span<const ChainRow> rows) {
    std::vector<std::vector<ChainRow>> series;
    std::map<std::pair<std::string, int>, std::size_t> index;
    for (const auto& row : rows) {
        const auto [it, inserted] = index.try_emplace({row.ticker, row.days}, series.size());
        if (inserted) {
            series.emplace_back();
        }
        series[it->second].push_back(row);
    }
    return series;
}

// One strangle per series. Per-ticker targets override the default delta.
inline std::vector<MarketStrangle> benchmark_chain(std::span<const ChainRow> rows, double default_delta,
                                                   const std::map<std::string, double>& targets = {},
                                                   double r = 0.0) {
    std::vector<MarketStrangle> out;
    for (const auto& series : split_series(rows)) {
        const auto it = targets.find(series.front().ticker);
        out.push_back(select_strangle(series, it == targets.end() ? default_delta : it->second, r));
    }
    return out;
}

inline void benchmark_report(std::ostream& os, std::span<const MarketStrangle> strangles) {
    os << report_header << '\n';
    std::size_t well_priced = 0;
    for (const auto& s : strangles) {
        std::string iv;
        const auto& p = s.put_row.iv;
        const auto& c = s.call_row.iv;
        if (p && c) {
            iv = fmt::fixed(0.5 * (*p + *c), 4);
        } else if (p || c) {
            iv = fmt::fixed(p ? *p : *c, 4);
        }
        os << s.call_row.ticker << ',' << fmt::shortest(s.call_row.underlying) << ',' << iv << ','
           << s.call_row.days << ',' << fmt::shortest(s.target_delta) << ',' << fmt::shortest(s.put_row.strike)
           << ',' << fmt::shortest(s.call_row.strike) << ',' << fmt::fixed(s.mid_total, 6) << ','
           << fmt::fixed(s.r_hat, 6) << ',' << fmt::fixed(s.r_bar, 6) << ',' << to_string(s.verdict) << '\n';
        if (s.verdict == Verdict::well_priced) {
            ++well_priced;
        }
    }
    if (!strangles.empty()) {
        os << "# totals: well_priced=" << well_priced << " below_bound=" << strangles.size() - well_priced << '\n';
    }
}

}  // namespace strangle::chain
