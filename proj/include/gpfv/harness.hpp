#pragma once

// Experiment driver and the two convergence studies.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpfv/characteristics.hpp"
#include "gpfv/io.hpp"

namespace gpfv {

/// The characteristic a run actually simulates: truncated at eps when given,
/// otherwise rejected if it has infinite activity.
Characteristic runnable_characteristic(const RunConfig& config);

struct RunOutcome {
    int status = 0;                  ///< 0 ok, 1 a check failed
    std::vector<std::string> files;  ///< written artifacts, relative to the output directory
    nlohmann::ordered_json summary;
};

/// Runs the experiment and writes its artifacts under config.out.
RunOutcome run(const RunConfig& config);

struct ClosednessRow {
    double eps = 0.0;
    double ks = 0.0;  ///< KS(N_T at eps, N_T at eps / 2)
    double dropped_rate = 0.0;
    double mean_n = 0.0;
};

/// For each eps: KS distance between N_T under truncation at eps and at eps/2.
/// Streams are sampled once per replicate at the finest level and thinned.
std::vector<ClosednessRow> closedness_study(const Characteristic& c, std::vector<double> eps, double horizon,
                                            double n0, std::size_t replicates, std::uint64_t seed);

/// int (z_b / (1 - z_d + z_b))^2 dPi: the pair-merger rate at N = 1.
double pair_merger_rate(const Characteristic& c);

struct HeterozygosityCurve {
    std::vector<double> t;
    std::vector<double> mean_h;
    std::vector<double> se_h;
};

/// Mean w (1 - w) over replicates of a two-type run from w0.
HeterozygosityCurve heterozygosity_curve(const Characteristic& c, double w0, double horizon, std::size_t intervals,
                                         std::size_t replicates, std::uint64_t seed);

struct WfStudyEntry {
    double k = 0.0;
    double lambda_hat = 0.0;
    double horizon = 0.0;
    double fitted_rate = 0.0;
    std::string trajectory_csv;  ///< file names, empty when nothing was written
    std::string muller_svg;
};

/// For each k: one 20-type run over [0, 2 / lambda_hat] written as trajectory CSV
/// and Muller SVG (when out_dir is non-empty), plus a heterozygosity decay fit over
/// [0, 3 / lambda_hat] from `replicates` two-type runs.
std::vector<WfStudyEntry> wf_study(const std::vector<double>& ks, std::size_t replicates, std::uint64_t seed,
                                   const std::string& out_dir);

}  // namespace gpfv
