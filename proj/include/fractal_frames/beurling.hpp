#ifndef FRACTAL_FRAMES_BEURLING_HPP
#define FRACTAL_FRAMES_BEURLING_HPP

// Ball counts, alpha-Beurling density proxies and log-log dimension estimates
// for finite truncations of a frequency set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "fractal_frames/errors.hpp"
#include "fractal_frames/lattice.hpp"

namespace fractal_frames {

using RealPoint = std::vector<double>;

inline std::size_t ball_count(const std::vector<IntVector>& points, const RealPoint& center, double radius) {
    const double r2 = radius * radius * (1.0 + 1e-12);
    std::size_t count = 0;
    for (const auto& p : points) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double t = static_cast<double>(p[i]) - center[i];
            s += t * t;
        }
        if (s <= r2) ++count;
    }
    return count;
}

/// max over radii h and centers x of #(points in closed B(x, h)) / h^alpha; a
/// finite-truncation proxy for the upper alpha-density.
inline double beurling_density(const std::vector<IntVector>& points, double alpha, const std::vector<double>& radii,
                               const std::vector<RealPoint>& centers) {
    double best = 0.0;
    for (double h : radii) {
        if (!(h > 0.0)) throw PreconditionError("radii must be positive");
        for (const auto& x : centers) best = std::max(best, static_cast<double>(ball_count(points, x, h)) / std::pow(h, alpha));
    }
    return best;
}

/// 0 plus a coarse grid (steps of radius/2 in each coordinate) inside the truncation radius.
inline std::vector<RealPoint> density_centers(std::size_t dim, double radius, int steps = 2) {
    std::vector<RealPoint> centers{RealPoint(dim, 0.0)};
    std::vector<int> idx(dim, -steps);
    const double step = radius / (2.0 * steps);
    for (;;) {
        RealPoint c(dim);
        bool origin = true;
        for (std::size_t i = 0; i < dim; ++i) {
            c[i] = step * idx[i];
            origin = origin && idx[i] == 0;
        }
        if (!origin) centers.push_back(c);
        std::size_t i = 0;
        while (i < dim && ++idx[i] > steps) idx[i++] = -steps;
        if (i == dim) break;
    }
    return centers;
}

struct RadiusCount {
    double radius = 0.0;
    std::size_t count = 0;
};

struct DimensionEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of the log-log fit
    std::optional<double> ceiling;
    bool exceeds_ceiling = false;  // slope > ceiling + 0.05
};

/// Least-squares slope of log count against log h. Needs at least three
/// distinct radii spanning two decades.
inline DimensionEstimate beurling_dim_estimate(const std::vector<RadiusCount>& table,
                                               std::optional<double> ceiling = std::nullopt) {
    std::set<double> distinct;
    double h_min = 0.0, h_max = 0.0;
    for (const auto& rc : table) {
        if (!(rc.radius > 0.0)) throw PreconditionError("radii must be positive");
        if (rc.count == 0) throw PreconditionError("ball counts must be positive for a log-log fit");
        distinct.insert(rc.radius);
    }
    if (distinct.size() < 3) throw PreconditionError("dimension estimate needs counts at >= 3 distinct radii");
    h_min = *distinct.begin();
    h_max = *distinct.rbegin();
    if (h_max / h_min < 100.0) throw PreconditionError("radii must span at least two decades");

    const double n = static_cast<double>(table.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& rc : table) {
        const double x = std::log(rc.radius), y = std::log(static_cast<double>(rc.count));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    DimensionEstimate est;
    est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    est.intercept = (sy - est.slope * sx) / n;
    double ss = 0.0;
    for (const auto& rc : table) {
        const double r = std::log(static_cast<double>(rc.count)) - (est.intercept + est.slope * std::log(rc.radius));
        ss += r * r;
    }
    est.residual = std::sqrt(ss / n);
    est.ceiling = ceiling;
    est.exceeds_ceiling = ceiling && est.slope > *ceiling + 0.05;
    return est;
}

struct BeurlingReport {
    std::vector<double> alpha_grid;
    std::vector<double> densities;  // one per alpha, nonincreasing for radii >= 1
    std::vector<RadiusCount> counts;  // centered at 0
    std::optional<DimensionEstimate> dimension;
    double dimension_value = 0.0;  // slope, or 0 when no estimate is possible
};

inline BeurlingReport beurling_report(const std::vector<IntVector>& points, const std::vector<double>& radii,
                                      const std::vector<double>& alpha_grid, std::optional<double> ceiling) {
    BeurlingReport report;
    report.alpha_grid = alpha_grid;
    if (points.empty() || radii.empty()) return report;
    const std::size_t dim = points.front().size();
    const RealPoint origin(dim, 0.0);
    for (double h : radii) report.counts.push_back({h, ball_count(points, origin, h)});
    const auto centers = density_centers(dim, radii.back());
    for (double alpha : alpha_grid) report.densities.push_back(beurling_density(points, alpha, radii, centers));
    try {
        report.dimension = beurling_dim_estimate(report.counts, ceiling);
        report.dimension_value = report.dimension->slope;
    } catch (const PreconditionError&) {
        report.dimension.reset();
    }
    return report;
}

}  // namespace fractal_frames

#endif  // FRACTAL_FRAMES_BEURLING_HPP
