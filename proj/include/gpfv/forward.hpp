#pragma once

// Measure-valued (N, rho) process with atomic type distributions.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gpfv/characteristics.hpp"

namespace gpfv {

inline constexpr double kPruneTol = 1e-15;

struct Atom {
    double type = 0.0;  ///< point of the type space; finite label sets use 0, 1, 2, ...
    double mass = 0.0;
};

/// Finite atomic measure on the type space. Atoms are kept sorted by type.
struct TypeMeasure {
    std::vector<Atom> atoms;
    double total = 0.0;  ///< N; masses sum to it up to rounding

    /// `total` times the given frequencies (which must sum to 1).
    static TypeMeasure from_frequencies(double total, std::span<const double> types, std::span<const double> freqs);
    /// k types 0..k-1 of equal mass total / k.
    static TypeMeasure equal_types(double total, std::size_t k);

    double mass_of(double type) const;
    double frequency_of(double type) const { return mass_of(type) / total; }
    /// rho([0, kappa]).
    double cdf(double kappa) const;
};

/// One reproduction event: the parent type is the atom hit by parent_draw under
/// the inverse CDF of the masses; result is (1 - z_d) m + z_b delta_parent.
TypeMeasure forward_step(const TypeMeasure& m, const Event& z, double parent_draw, double* parent_type = nullptr);

struct ForwardJump {
    double t = 0.0;
    Event z;
    double parent = 0.0;
    double zbar = 0.0;
};

struct FrequencySample {
    double t = 0.0;
    double n = 0.0;
    double w = 0.0;  ///< frequency of the tracked type set
};

struct ForwardOptions {
    std::vector<double> tracked;   ///< types whose joint frequency is recorded
    bool stop_at_fixation = false; ///< stop once one atom carries all mass
    bool record_jumps = true;
    bool record_snapshots = true;
};

struct ForwardPath {
    std::vector<std::pair<double, TypeMeasure>> snapshots;
    std::vector<ForwardJump> jumps;
    std::vector<FrequencySample> frequency;
    TypeMeasure final_measure;
    double final_time = 0.0;
    std::optional<double> fixation_time;
};

/// Drives the measure along a given stream. Drift changes N only; the type
/// distribution moves at events. Each event consumes substream index 0.
ForwardPath simulate_forward(const EventStream& stream, const Drift& drift, const TypeMeasure& initial,
                             std::span<const double> grid, const ForwardOptions& options = {});
ForwardPath simulate_forward(const Characteristic& c, const TypeMeasure& initial, double horizon,
                             std::uint64_t seed, std::span<const double> grid, const ForwardOptions& options = {});

struct HeterozygositySample {
    double t = 0.0;
    double h = 0.0;
};

/// w (1 - w) of the tracked frequency at each grid time.
std::vector<HeterozygositySample> heterozygosity(const ForwardPath& path);

}  // namespace gpfv
