#pragma once

// Coalescent dual: lineages traced backwards through a recorded environment,
// either with the marks of a lookdown run (coupled) or with fresh marks
// (quenched).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpfv/characteristics.hpp"
#include "gpfv/forward.hpp"
#include "gpfv/lookdown.hpp"

namespace gpfv {

/// Blocks of {1..y}, each sorted, ordered by their smallest element.
struct Partition {
    std::vector<std::vector<std::uint32_t>> blocks;

    static Partition singletons(std::size_t y);
    std::size_t size() const { return blocks.size(); }
    friend bool operator==(const Partition&, const Partition&) = default;
};

struct CoalescentJump {
    double s = 0.0;  ///< backward time T - t
    double t = 0.0;  ///< calendar time of the event
    std::size_t before = 0;
    std::size_t after = 0;
};

struct CoalescentTrace {
    std::size_t y = 0;
    double horizon = 0.0;
    Partition final_partition;          ///< at backward time T (calendar 0)
    std::vector<CoalescentJump> jumps;  ///< in increasing s
    /// Level of each final block at calendar 0 (coupled mode only).
    std::vector<std::uint32_t> block_levels;

    /// Left-continuous Y: the count just before any merge at backward time s.
    std::size_t lineages_at(double s) const;
    std::size_t final_count() const { return final_partition.size(); }
};

/// Replays the lookdown events in [0, T] backwards with the recorded marks.
/// Throws std::invalid_argument if y exceeds the level count or marks were not recorded.
CoalescentTrace trace_coupled(const LookdownPath& path, std::size_t y, double horizon);

struct EnvironmentEvent {
    double t = 0.0;
    Event z;
    double n_pre = 0.0;
    double n_post = 0.0;
    std::uint64_t key = 0;

    friend bool operator==(const EnvironmentEvent&, const EnvironmentEvent&) = default;
};

/// Event times and marks with the population sizes around each event.
struct Environment {
    double horizon = 0.0;
    double n0 = 1.0;
    std::vector<EnvironmentEvent> events;
};

Environment make_environment(const EventStream& stream, const Drift& drift, double n0);
Environment make_environment(const Characteristic& c, double n0, double horizon, std::uint64_t seed);

/// Asserts n_post == apply_event(n_pre, z) exactly and z_b / n_post == zbar(n_pre)
/// to 1e-12 for each event; with a drift also checks the flow between events.
/// Throws std::runtime_error naming the first bad event.
void check_environment(const Environment& env, const std::optional<Drift>& drift = std::nullopt);

/// JSON lines {"t","z_d","z_b","N_pre","N_post","substream_key"}; doubles round-trip exactly.
void write_environment(std::ostream& out, const Environment& env);
/// Reads the format above and runs check_environment. horizon is the last event time
/// unless given.
Environment read_environment(std::istream& in, std::optional<double> horizon = std::nullopt);

/// Each lineage joins an event with probability z_b / N_post, independently;
/// two or more participants merge.
CoalescentTrace trace_quenched(const Environment& env, std::size_t y, double horizon, std::uint64_t seed);

/// Product of (1 - zbar_i) over events with t_i <= t.
double dust_probability(const Environment& env, double t);

struct DualityStat {
    double lhs = 0.0;  ///< mean of w_T^y over forward replicates
    double rhs = 0.0;  ///< mean of x^{Y_T} over environment replicates
    double lhs_se = 0.0;
    double rhs_se = 0.0;
    double pooled_se = 0.0;
    std::size_t replicates = 0;
};

/// Two types with initial frequency x of the tracked type, N0 = 1.
DualityStat moment_duality_stat(const Characteristic& c, double x, std::size_t y, double horizon,
                                std::size_t replicates, std::uint64_t seed);

/// Product test function f(k_1..k_y) = prod g_i(k_i) evaluated through a
/// partition: prod over blocks B of <rho / |rho|, prod_{i in B} g_i>.
double duality_functional(const Partition& partition, const TypeMeasure& rho,
                          const std::vector<std::function<double(double)>>& g);

}  // namespace gpfv
