#pragma once

// Exact event-driven simulation of the population-size process
//   dN = (gamma_b - gamma_d N) dt + sum over events of (z_b - z_d N_-)
// and the diagnostics built on it.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gpfv/characteristics.hpp"

namespace gpfv {

/// Closed-form solution of dN/dt = gamma_b - gamma_d N after time dt.
double flow(double n, const Drift& drift, double dt);

/// (1 - z_d) N + z_b. Throws std::invalid_argument on a zero result.
double apply_event(double n, const Event& z);

struct JumpRecord {
    double t = 0.0;
    double n_before = 0.0;
    Event z;
    double n_after = 0.0;
};

struct GridSample {
    double t = 0.0;
    double n = 0.0;
};

struct PopPath {
    double n0 = 1.0;
    Drift drift;
    double horizon = 0.0;
    std::vector<JumpRecord> jumps;
    std::vector<GridSample> grid;
    double final_n = 1.0;  ///< N at the horizon
};

/// n + 1 equally spaced times on [0, horizon].
std::vector<double> uniform_grid(double horizon, std::size_t intervals);

/// Walks an event stream and hands out pre-event sizes with the exact recursion
/// N_{t_i-} = flow(N_{t_{i-1}}, t_i - t_{i-1}). Every module that needs N on a
/// shared stream goes through this so that the N tracks agree bitwise.
class SizeTracker {
public:
    SizeTracker(double n0, const Drift& drift) : n_(n0), drift_(drift) {}

    /// Size just before an event at time t (t >= current time). Does not commit.
    double before(double t) const { return flow(n_, drift_, t - t_); }
    /// Moves to time t and applies z; returns the post-event size.
    double jump(double t, const Event& z);
    /// Size at time t without moving (used for output grids).
    double peek(double t) const { return before(t); }

    double time() const { return t_; }
    double size() const { return n_; }

private:
    double n_;
    double t_ = 0.0;
    Drift drift_;
};

PopPath simulate_pop(const EventStream& stream, const Drift& drift, double n0, std::span<const double> grid);
/// Rejects infinite-activity characteristics (truncate first).
PopPath simulate_pop(const Characteristic& c, double n0, double horizon, std::uint64_t seed,
                     std::span<const double> grid);

struct SandwichResult {
    bool ok = true;
    double max_violation = 0.0;  ///< largest relative excess over either bound
};

/// Checks exp(-gamma_d t) prod(1 - z_d^i) N0 <= N_t <= N0 + gamma_b t + sum z_b^i at
/// every jump and grid time, restarting the lower bound after z_d = 1 events.
SandwichResult sandwich_check(const PopPath& path, double rel_tol = 1e-9);

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> weights;  ///< normalized to sum 1
};

struct StationaryStats {
    double time_mean = 0.0;   ///< exact time average of N over the sampling window
    double min_n = 0.0;       ///< minimum of N over the whole path
    Histogram occupation;     ///< time-weighted occupation on a fine grid
    std::vector<double> marginal;  ///< grid samples of N after burn-in
    std::string warning;      ///< set when gamma_d = 0 or Pi = 0
};

StationaryStats stationary_stats(const Characteristic& c, double n0, double burn_in, double sample_horizon,
                                 std::uint64_t seed, std::size_t bins = 64, double sample_dt = 0.05);

/// (gamma_b - gamma_d N) f'(N) + int [f((1 - z_d) N + z_b) - f(N)] dPi.
double generator_of_size(const Characteristic& c, const std::function<double(double)>& f,
                         const std::function<double(double)>& f_prime, double n);

}  // namespace gpfv
