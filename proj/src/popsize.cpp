#include "gpfv/popsize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gpfv {

double flow(double n, const Drift& drift, double dt) {
    if (dt == 0.0) return n;
    if (drift.death > 0.0) {
        const double fixed = drift.birth / drift.death;
        return fixed + (n - fixed) * std::exp(-drift.death * dt);
    }
    return n + drift.birth * dt;
}

double apply_event(double n, const Event& z) {
    const double out = (1.0 - z.death) * n + z.birth;
    if (!(out > 0.0)) throw std::invalid_argument("event empties the population (excluded event)");
    return out;
}

std::vector<double> uniform_grid(double horizon, std::size_t intervals) {
    std::vector<double> g(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        g[i] = horizon * static_cast<double>(i) / static_cast<double>(intervals);
    }
    return g;
}

double SizeTracker::jump(double t, const Event& z) {
    n_ = apply_event(before(t), z);
    t_ = t;
    return n_;
}

PopPath simulate_pop(const EventStream& stream, const Drift& drift, double n0, std::span<const double> grid) {
    if (!(n0 > 0.0)) throw std::invalid_argument("N0 must be positive");
    PopPath path;
    path.n0 = n0;
    path.drift = drift;
    path.horizon = stream.horizon;
    path.jumps.reserve(stream.events.size());
    path.grid.reserve(grid.size());

    SizeTracker size(n0, drift);
    std::size_t g = 0;
    for (const auto& e : stream.events) {
        while (g < grid.size() && grid[g] < e.t) {
            path.grid.push_back({grid[g], size.peek(grid[g])});
            ++g;
        }
        const double before = size.before(e.t);
        const double after = size.jump(e.t, e.z);
        path.jumps.push_back({e.t, before, e.z, after});
    }
    for (; g < grid.size(); ++g) path.grid.push_back({grid[g], size.peek(grid[g])});
    path.final_n = size.peek(stream.horizon);
    return path;
}

PopPath simulate_pop(const Characteristic& c, double n0, double horizon, std::uint64_t seed,
                     std::span<const double> grid) {
    return simulate_pop(sample_event_stream(c, horizon, seed), c.drift, n0, grid);
}

SandwichResult sandwich_check(const PopPath& path, double rel_tol) {
    SandwichResult result;
    // Lower bound: anchor * exp(-gamma_d (t - anchor_t)) * product since anchor.
    double anchor = path.n0;
    double anchor_t = 0.0;
    double product = 1.0;
    double birth_sum = 0.0;

    auto check = [&](double t, double n) {
        const double lower = anchor * std::exp(-path.drift.death * (t - anchor_t)) * product;
        const double upper = path.n0 + path.drift.birth * t + birth_sum;
        if (!(n > 0.0)) {
            result.ok = false;
            result.max_violation = std::numeric_limits<double>::infinity();
            return;
        }
        const double below = (lower - n) / n;
        const double above = (n - upper) / upper;
        result.max_violation = std::max({result.max_violation, below, above});
        if (below > rel_tol || above > rel_tol) result.ok = false;
    };

    std::size_t g = 0;
    for (const auto& j : path.jumps) {
        while (g < path.grid.size() && path.grid[g].t < j.t) {
            check(path.grid[g].t, path.grid[g].n);
            ++g;
        }
        check(j.t, j.n_before);
        birth_sum += j.z.birth;
        if (j.z.death == 1.0) {
            anchor = j.n_after;
            anchor_t = j.t;
            product = 1.0;
        } else {
            product *= 1.0 - j.z.death;
        }
        check(j.t, j.n_after);
    }
    for (; g < path.grid.size(); ++g) check(path.grid[g].t, path.grid[g].n);
    return result;
}

StationaryStats stationary_stats(const Characteristic& c, double n0, double burn_in, double sample_horizon,
                                 std::uint64_t seed, std::size_t bins, double sample_dt) {
    StationaryStats stats;
    if (!(c.drift.death > 0.0) || c.jump.empty()) {
        stats.warning = "ergodicity hypothesis (gamma_d > 0 and Pi != 0) violated; statistics are descriptive only";
    }
    const double horizon = burn_in + sample_horizon;
    const auto stream = sample_event_stream(c, horizon, seed);
    const Drift& drift = c.drift;

    // Integral of the flow started at n over [0, dt].
    auto flow_integral = [&](double n, double dt) {
        if (drift.death > 0.0) {
            const double fixed = drift.birth / drift.death;
            return fixed * dt + (n - fixed) * (-std::expm1(-drift.death * dt)) / drift.death;
        }
        return n * dt + 0.5 * drift.birth * dt * dt;
    };

    SizeTracker size(n0, drift);
    stats.min_n = n0;
    double area = 0.0;
    // Accumulate the integral of N over [burn_in, horizon] piece by piece.
    auto accumulate = [&](double from_t, double from_n, double to_t) {
        const double a = std::max(from_t, burn_in);
        if (to_t <= a) return;
        area += flow_integral(flow(from_n, drift, a - from_t), to_t - a);
    };

    const std::size_t samples = static_cast<std::size_t>(std::floor(sample_horizon / sample_dt));
    std::size_t next_sample = 0;
    auto emit_samples_until = [&](double t) {
        while (next_sample <= samples) {
            const double ts = burn_in + static_cast<double>(next_sample) * sample_dt;
            if (ts >= t) break;
            stats.marginal.push_back(size.peek(ts));
            ++next_sample;
        }
    };

    for (const auto& e : stream.events) {
        emit_samples_until(e.t);
        const double before = size.before(e.t);
        stats.min_n = std::min(stats.min_n, before);
        accumulate(size.time(), size.size(), e.t);
        size.jump(e.t, e.z);
        stats.min_n = std::min(stats.min_n, size.size());
    }
    emit_samples_until(std::numeric_limits<double>::infinity());
    accumulate(size.time(), size.size(), horizon);
    stats.min_n = std::min(stats.min_n, size.peek(horizon));
    stats.time_mean = area / sample_horizon;

    if (!stats.marginal.empty()) {
        const auto [lo_it, hi_it] = std::minmax_element(stats.marginal.begin(), stats.marginal.end());
        stats.occupation.lo = *lo_it;
        stats.occupation.hi = *hi_it > *lo_it ? *hi_it : *lo_it + 1e-12;
        stats.occupation.weights.assign(bins, 0.0);
        const double width = (stats.occupation.hi - stats.occupation.lo) / static_cast<double>(bins);
        for (double x : stats.marginal) {
            auto b = static_cast<std::size_t>((x - stats.occupation.lo) / width);
            stats.occupation.weights[std::min(b, bins - 1)] += 1.0;
        }
        for (double& w : stats.occupation.weights) w /= static_cast<double>(stats.marginal.size());
    }
    return stats;
}

double generator_of_size(const Characteristic& c, const std::function<double(double)>& f,
                         const std::function<double(double)>& f_prime, double n) {
    const double fn = f(n);
    const double drift_part = (c.drift.birth - c.drift.death * n) * f_prime(n);
    const double jump_part = c.jump.integrate([&](double d, double b) { return f((1.0 - d) * n + b) - fn; });
    return drift_part + jump_part;
}

}  // namespace gpfv
