#pragma once

// Config parsing and CSV output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpfv/characteristics.hpp"
#include "gpfv/forward.hpp"
#include "gpfv/lookdown.hpp"
#include "gpfv/popsize.hpp"
#include "gpfv/prelimit.hpp"

namespace gpfv {

/// Schema violation; the message names the offending field path (and line for parse errors).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Characteristic from JSON. Either {"preset": ...} or {"gamma": ..., "jump": ...}.
///
///   {"preset": "wright_fisher", "k": 1}
///   {"preset": "showcase"}
///   {"preset": "diagonal_lambda", "scale": 1, "exponent": 0.5, "drift": 1, "birth_scale": 0.5}
///   {"gamma": [1, 0.5],
///    "jump": {"family": "product", "rate": 1,
///             "death": {"law": "point", "at": 0},
///             "birth": {"law": "uniform", "lo": 0, "hi": 1}},
///    "balance_tol": 1e-9}
///
/// "gamma" may also be {"death": ..., "birth": ...}. "jump" may also be a list
/// of components. Other families: "point_masses" with "atoms": [{"rate", "z_d", "z_b"}], and "diagonal_lambda" with scale,
/// exponent, u_min, birth_scale, kingman_atom. Unknown keys are rejected.
Characteristic characteristic_from_json(const nlohmann::json& j, const std::string& where = "characteristic");
nlohmann::json characteristic_to_json(const Characteristic& c);

enum class ExperimentKind { popsize, forward, lookdown, prelimit, dual, verify_suite, wf_study, closedness_study };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& s);

struct RunConfig {
    Characteristic characteristic = wright_fisher_scaling(1.0);
    ExperimentKind experiment = ExperimentKind::popsize;
    double horizon = 5.0;
    std::size_t replicates = 1;
    std::uint64_t seed = 1;
    std::size_t grid = 100;             ///< number of grid intervals on [0, T]
    std::optional<double> eps;          ///< truncation level
    double n0 = 1.0;
    std::vector<double> frequencies{0.5, 0.5};  ///< initial type frequencies, types 0, 1, ...
    std::size_t levels = 64;            ///< lookdown levels
    std::uint64_t m = 100;              ///< prelimit carrying capacity
    std::size_t y = 5;                  ///< dual sample size
    double x = 0.3;                     ///< dual moment point
    std::string out = "out";            ///< output directory
};

/// Parses and validates; throws ConfigError with the field path.
RunConfig run_config_from_json(const nlohmann::json& j);
/// Reads a file; parse errors report the line.
nlohmann::json read_json_file(const std::string& path);
nlohmann::json run_config_to_json(const RunConfig& c);

/// t,N,jump_flag,z_d,z_b. Grid rows have jump_flag 0; each jump adds a row with
/// the post-event size.
void write_popsize_csv(std::ostream& out, const PopPath& path);
/// t,N,mass_<type>... from the snapshots, one column per type that ever had mass.
void write_trajectory_csv(std::ostream& out, const ForwardPath& path);
/// "# m=<m>" then t,N,N_scaled,w with integer N.
void write_prelimit_csv(std::ostream& out, const IbPath& path);
/// t,z_d,z_b,zbar,J with J semicolon-joined.
void write_lookdown_events_csv(std::ostream& out, const LookdownPath& path);

/// Doubles written with enough digits to round-trip.
std::string format_double(double x);

}  // namespace gpfv
