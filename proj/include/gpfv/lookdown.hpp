#pragma once

// Finite-level lookdown particle system driven by the same Poisson events as
// the population size. Level i carries a type and the label of its level-i
// ancestor at time 0.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gpfv/characteristics.hpp"
#include "gpfv/forward.hpp"

namespace gpfv {

/// Sorted 1-based level indices.
using LevelSet = std::vector<std::uint32_t>;

/// {i : u_i <= zbar}, with u_1 = uniforms[0].
LevelSet mark_levels(std::span<const double> uniforms, double zbar);

/// Number of entries of the sorted set J that are <= level.
inline std::size_t count_up_to(std::span<const std::uint32_t> marked, std::size_t level) {
    std::size_t c = 0;
    while (c < marked.size() && marked[c] <= level) ++c;
    return c;
}

/// Level, before the event, that post-event level `level` descends from.
std::size_t parent_level(std::size_t level, std::span<const std::uint32_t> marked);

/// Copies of k(min J) inserted at J \ {min J}; the others shift up and the last
/// |J| - 1 entries fall off. Identity when |J| <= 1.
template <class T>
std::vector<T> theta(std::span<const std::uint32_t> marked, std::span<const T> k) {
    std::vector<T> out(k.begin(), k.end());
    if (marked.size() <= 1) return out;
    const std::size_t n = k.size();
    const std::size_t first = marked[0];
    std::size_t in_j = 0;  // |J ∩ [1, i]|
    for (std::size_t i = first; i <= n; ++i) {
        const bool member = in_j < marked.size() && marked[in_j] == i;
        if (member) ++in_j;
        out[i - 1] = member ? k[first - 1] : k[i - in_j];
    }
    return out;
}

struct Level {
    double type = 0.0;
    std::uint32_t ancestor = 0;

    friend bool operator==(const Level&, const Level&) = default;
};

struct LookdownState {
    std::vector<Level> levels;
    double n = 1.0;
    double t = 0.0;
};

struct LookdownEvent {
    double t = 0.0;
    Event z;
    double zbar = 0.0;
    LevelSet marked;  ///< every marked level, including singletons
};

struct LookdownOptions {
    std::vector<std::size_t> fixation_levels;  ///< n values whose quasi-fixation time is tracked
    bool stop_when_fixed = false;              ///< stop once all tracked n have fixed
    bool record_events = true;
};

struct LookdownPath {
    LookdownState initial;
    LookdownState final_state;
    double horizon = 0.0;
    std::vector<LookdownEvent> events;
    std::vector<std::pair<std::size_t, std::optional<double>>> quasi_fixation;
    std::optional<double> first_mark_of_level_one;
    bool events_recorded = true;
};

/// Types are given per level; N follows the SizeTracker recursion. The marks of
/// level i are substream index i, so levels 1..m do not depend on n > m.
LookdownPath simulate_lookdown(const EventStream& stream, const Drift& drift, double n0,
                               std::span<const double> initial_types, const LookdownOptions& options = {});
LookdownPath simulate_lookdown(const Characteristic& c, double n0, std::span<const double> initial_types,
                               double horizon, std::uint64_t seed, const LookdownOptions& options = {});
/// Initial types drawn iid from rho0 = initial / initial.total (stream "init").
LookdownPath simulate_lookdown(const Characteristic& c, double n0, std::size_t levels, const TypeMeasure& initial,
                               double horizon, std::uint64_t seed, const LookdownOptions& options = {});

/// iid draws from the normalized measure, level order.
std::vector<double> sample_initial_types(const TypeMeasure& rho0, std::size_t levels, std::uint64_t seed);

/// First time levels 1..n all descend from level 1; nullopt if not by the horizon.
/// Replays the recorded events. Throws if n exceeds the level count.
std::optional<double> quasi_fixation_time(const LookdownPath& path, std::size_t n);

/// Fraction of the levels whose type is in `tracked`.
double empirical_frequency(const LookdownState& state, std::span<const double> tracked);

/// Number of distinct ancestor labels among levels 1..y.
std::size_t distinct_ancestors(const LookdownState& state, std::size_t y);

}  // namespace gpfv
