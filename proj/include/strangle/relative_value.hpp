#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "strangle/black_scholes.hpp"
#include "strangle/delta_param.hpp"
#include "strangle/errors.hpp"
#include "strangle/format.hpp"
#include "strangle/normal.hpp"

// Relative value of a delta-symmetric strangle: the strangle price divided by
// the present value of the distance between its strikes.
namespace strangle {

// Below this nu the closed form is a ratio of two vanishing quantities.
inline constexpr double nu_min = 1e-6;

namespace detail {
inline void check_nu(const DeltaNuPoint& p) {
    if (p.nu() < nu_min) {
        throw DegenerateNuError(p.nu(), nu_min);
    }
}

inline double checked_strangle_z(double delta) {
    if (!(delta > 0.0 && delta < 0.5)) {
        throw DomainError("strangle delta must lie in (0, 0.5)");
    }
    return normal::quantile(delta);
}
}  // namespace detail

//            e^{z nu} Phi(z + nu) - e^{-z nu} Phi(z - nu)
// R(d, nu) = --------------------------------------------
//                      e^{-z nu} - e^{z nu}
inline double rv_closed(const DeltaNuPoint& p) {
    detail::check_nu(p);
    const double z = p.z();
    const double nu = p.nu();
    const double zn = z * nu;
    const double numerator = std::exp(zn) * normal::cdf(z + nu) - std::exp(-zn) * normal::cdf(z - nu);
    return numerator / (2.0 * std::sinh(-zn));
}

// Same function written with the normal density only.
inline double rv_phi_form(const DeltaNuPoint& p) {
    detail::check_nu(p);
    const double z = p.z();
    const double nu = p.nu();
    const double phi_up = normal::pdf(z + nu);
    const double phi_dn = normal::pdf(z - nu);
    // phi(z + nu) - phi(z - nu) without cancellation when z * nu is small
    const double spread = -2.0 * normal::pdf(z) * std::exp(-0.5 * nu * nu) * std::sinh(z * nu);
    return (phi_dn * normal::cdf(z + nu) - phi_up * normal::cdf(z - nu)) / spread;
}

// nu -> 0 limit of the relative value and its upper bound for every nu:
// -phi(z)/z - delta.
inline double bound(double delta) {
    const double z = detail::checked_strangle_z(delta);
    return -normal::pdf(z) / z - delta;
}

// d bound / d delta = 1 / z^2.
inline double bound_derivative(double delta) {
    const double z = detail::checked_strangle_z(delta);
    return 1.0 / (z * z);
}

// Probability that the underlying finishes between the two strikes.
inline double success_probability(const DeltaNuPoint& p) noexcept {
    return normal::cdf(-p.z() - p.nu()) - normal::cdf(p.z() - p.nu());
}

struct StranglePricing {
    DeltaNuPoint point;
    double k_minus;
    double k_plus;
    double price_put;
    double price_call;
    double total;
    double relative_value;
};

// Prices both legs in a concrete market and forms the price ratio directly.
inline StranglePricing price_strangle(const MarketContext& ctx, double delta) {
    const DeltaNuPoint point(delta, ctx.nu());
    const auto [k_minus, k_plus] = strikes(ctx, delta);
    const double put = put_price_dn(ctx, delta);
    const double call = call_price_dn(ctx, delta);
    const double total = put + call;
    return {point, k_minus, k_plus, put, call, total, total / ((k_plus - k_minus) * ctx.discount())};
}

// ---------------------------------------------------------------------------
// Finite-difference monotonicity audit over a rectangular grid.

enum class GridAxis { delta, nu };

struct MonotonicityViolation {
    DeltaNuPoint point;
    GridAxis axis;
    double slope;
};

struct MonotonicityReport {
    std::size_t nu_checks = 0;
    std::size_t delta_checks = 0;
    std::vector<MonotonicityViolation> violations;
    // Points dropped before checking: outside B or below nu_min.
    std::vector<DeltaNuPoint> excluded;

    bool clean() const noexcept { return violations.empty(); }
    bool empty() const noexcept { return nu_checks == 0 && delta_checks == 0 && violations.empty(); }
};

// Central differences between neighbouring grid points. A point is checked
// along an axis only when both neighbours on that axis are also in the grid
// and in B. R must not increase with nu and must increase with delta; slack
// is rel_tol times R at the point.
inline MonotonicityReport monotonicity_report(std::span<const DeltaNuPoint> grid, double rel_tol = 1e-9) {
    MonotonicityReport report;
    std::map<std::pair<double, double>, double> values;
    std::vector<double> deltas;
    std::vector<double> nus;
    for (const auto& p : grid) {
        if (!in_domain_B(p) || p.nu() < nu_min) {
            report.excluded.push_back(p);
            continue;
        }
        values.emplace(std::pair{p.delta(), p.nu()}, rv_closed(p));
        deltas.push_back(p.delta());
        nus.push_back(p.nu());
    }
    for (auto* axis : {&deltas, &nus}) {
        std::sort(axis->begin(), axis->end());
        axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
    }

    const auto lookup = [&](double d, double n) -> const double* {
        const auto it = values.find({d, n});
        return it == values.end() ? nullptr : &it->second;
    };
    const auto neighbours = [](const std::vector<double>& axis, double v) -> std::pair<const double*, const double*> {
        const auto it = std::lower_bound(axis.begin(), axis.end(), v);
        if (it == axis.begin() || it == axis.end() || std::next(it) == axis.end()) {
            return {nullptr, nullptr};
        }
        return {&*std::prev(it), &*std::next(it)};
    };

    for (const auto& [key, rv] : values) {
        const auto [d, n] = key;
        const double tol = rel_tol * std::abs(rv);

        if (const auto [lo, hi] = neighbours(nus, n); lo != nullptr) {
            const double* r_lo = lookup(d, *lo);
            const double* r_hi = lookup(d, *hi);
            if (r_lo != nullptr && r_hi != nullptr) {
                ++report.nu_checks;
                const double slope = (*r_hi - *r_lo) / (*hi - *lo);
                if (slope > tol) {
                    report.violations.push_back({DeltaNuPoint(d, n), GridAxis::nu, slope});
                }
            }
        }
        if (const auto [lo, hi] = neighbours(deltas, d); lo != nullptr) {
            const double* r_lo = lookup(*lo, n);
            const double* r_hi = lookup(*hi, n);
            if (r_lo != nullptr && r_hi != nullptr) {
                ++report.delta_checks;
                const double slope = (*r_hi - *r_lo) / (*hi - *lo);
                if (!(slope > -tol)) {
                    report.violations.push_back({DeltaNuPoint(d, n), GridAxis::delta, slope});
                }
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Grids and surfaces.

// i / per_unit for i = first..last. Dividing integers (rather than
// accumulating a step) lands each value on the double nearest its decimal.
inline std::vector<double> grid_axis(int first, int last, int per_unit) {
    std::vector<double> axis;
    for (int i = first; i <= last; ++i) {
        axis.push_back(static_cast<double>(i) / per_unit);
    }
    return axis;
}

// delta in {0.01, ..., 0.49}
inline std::vector<double> default_delta_axis() { return grid_axis(1, 49, 100); }
// nu in {0.01, ..., 1.00}
inline std::vector<double> default_nu_axis() { return grid_axis(1, 100, 100); }

inline std::vector<DeltaNuPoint> grid_points(std::span<const double> deltas, std::span<const double> nus,
                                             bool only_domain_B = false) {
    std::vector<DeltaNuPoint> points;
    points.reserve(deltas.size() * nus.size());
    for (double d : deltas) {
        for (double n : nus) {
            DeltaNuPoint p(d, n);
            if (!only_domain_B || in_domain_B(p)) {
                points.push_back(p);
            }
        }
    }
    return points;
}

struct SurfacePoint {
    double delta;
    double nu;
    double rv;
    double bound;
    double alpha;
};

inline SurfacePoint evaluate_point(const DeltaNuPoint& p) {
    return {p.delta(), p.nu(), rv_closed(p), bound(p.delta()), success_probability(p)};
}

// Delta-major evaluation of the full grid. Rows are split across workers;
// each writes its own slots, so the output does not depend on the split.
inline std::vector<SurfacePoint> evaluate_surface(std::span<const double> deltas, std::span<const double> nus,
                                                  unsigned workers = 1) {
    const auto points = grid_points(deltas, nus);
    std::vector<SurfacePoint> out(points.size());
    workers = std::clamp<unsigned>(workers, 1U, static_cast<unsigned>(std::max<std::size_t>(deltas.size(), 1)));
    const std::size_t rows = deltas.size();
    const std::size_t cols = nus.size();
    const auto run_rows = [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t i = row_begin * cols; i < row_end * cols; ++i) {
            out[i] = evaluate_point(points[i]);
        }
    };
    if (workers == 1) {
        run_rows(0, rows);
        return out;
    }
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (rows + workers - 1) / workers;
        for (std::size_t begin = 0; begin < rows; begin += chunk) {
            pool.emplace_back(run_rows, begin, std::min(rows, begin + chunk));
        }
    }
    return out;
}

inline void write_surface_csv(std::ostream& os, std::span<const SurfacePoint> surface) {
    os << "delta,nu,rv,bound,alpha\n";
    for (const auto& s : surface) {
        os << fmt::shortest(s.delta) << ',' << fmt::shortest(s.nu) << ',' << fmt::shortest(s.rv) << ','
           << fmt::shortest(s.bound) << ',' << fmt::shortest(s.alpha) << '\n';
    }
}

}  // namespace strangle
