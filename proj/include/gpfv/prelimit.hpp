#pragma once

// Individual-based model with carrying capacity m: integer population, one
// type per individual, kept in lookdown order.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gpfv/characteristics.hpp"
#include "gpfv/forward.hpp"

namespace gpfv {

struct IbSample {
    double t = 0.0;
    std::uint64_t count = 0;  ///< N^m
    double scaled = 0.0;      ///< N^m / m
    double w = 0.0;           ///< frequency of the tracked types (0 once extinct)
};

struct IbOptions {
    std::vector<double> tracked;
    /// Without types only the counts are simulated; the counts are the same
    /// either way for a given seed.
    bool track_types = true;
};

struct IbPath {
    std::uint64_t m = 1;
    std::uint64_t initial_size = 0;  ///< floor(m N0)
    std::uint64_t births = 0;        ///< B^m at the end
    std::uint64_t deaths = 0;        ///< D^m at the end
    std::uint64_t final_count = 0;
    std::vector<double> final_types;  ///< level order; empty without types
    std::vector<IbSample> grid;       ///< truncated at extinction
    bool extinct = false;
    std::optional<double> extinction_time;
    std::uint64_t transitions = 0;
};

/// Continuous deaths at total rate N gamma_d and births at rate m gamma_b; the
/// reproduction events come from the same EventSource as the limit models for
/// (c, seed), so limit and prelimit replicates share event times and marks.
IbPath simulate_ib(const Characteristic& c, std::uint64_t m, double n0, std::span<const double> initial_types,
                   double horizon, std::uint64_t seed, std::span<const double> grid, const IbOptions& options = {});
/// Initial types iid from the normalized measure (stream "init").
IbPath simulate_ib(const Characteristic& c, std::uint64_t m, double n0, const TypeMeasure& initial,
                   double horizon, std::uint64_t seed, std::span<const double> grid, const IbOptions& options = {});

/// Applies one birth step to a level vector: `births` copies of `parent` are
/// placed at the given sorted 0-based positions of the new vector and the old
/// individuals fill the other positions in order.
std::vector<double> insert_offspring(std::span<const double> levels, double parent,
                                     std::span<const std::size_t> positions);

}  // namespace gpfv
