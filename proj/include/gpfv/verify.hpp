#pragma once

// The statistical verification suite. Every criterion is a pure function of
// the options, so the JSON report is byte-stable for a fixed seed.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpfv/characteristics.hpp"

namespace gpfv {

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    /// Characteristic for the checks that do not fix their own (k = 1 scaling by default).
    Characteristic base = wright_fisher_scaling(1.0);
    /// Where the heterozygosity study writes its Muller SVGs; empty writes nothing.
    std::string artifact_dir;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    nlohmann::ordered_json stats;
};

struct Criterion {
    int id = 0;
    std::string title;
    double runtime_bound = std::numeric_limits<double>::infinity();  ///< seconds
    std::function<CriterionResult(const VerifyOptions&)> run;
};

/// Criteria 1 to 15 in order.
const std::vector<Criterion>& criteria();

std::vector<CriterionResult> run_verify_suite(const VerifyOptions& options);

/// Deterministic report: seed, per-criterion pass flag and statistics, overall flag.
std::string verify_report(const std::vector<CriterionResult>& results, const VerifyOptions& options);

}  // namespace gpfv
